//! Exact arithmetic for projective-plane-like manifolds.
//!
//! * [`series`]: truncated power series over the rationals and the genus
//!   series `x/tanh x`, `(x/2)/sinh(x/2)` and their duals.
//! * [`msq`]: multiplicative sequences as polynomials in Pontrjagin classes.
//! * [`abgroup`]: finitely generated abelian groups, Smith normal form,
//!   exact sequences and tensoring with `Z/n`.
//! * [`classify`]: invariants and classification of the models `M_{r,s}`.
//! * [`par`]: the parallel/sequential switch used by the enumerations.

pub mod abgroup;
pub mod classify;
pub mod msq;
pub mod par;
pub mod series;

pub use abgroup::{FgAbGroup, GroupError, GroupMap, IntMatrix};
pub use classify::{ClassifyError, HalfDim, InvariantReport, ModelDescriptor, ModelKind};
pub use msq::{GradedPoly, MsqError, PontrjaginSymbol};
pub use par::Execution;
pub use series::{PowerSeries, Rational, SeriesError};
