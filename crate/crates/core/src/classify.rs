//! Invariant-based classification of the model manifolds `M_{r,s}`.
//!
//! A model is the Thom space of an `R^m`-bundle over `S^m` with absolute
//! Euler number 1, for `m = 2, 4, 8`. Its tangential data are
//!
//! * `m = 4`: `p_4 = 2r y`, `ks = s y` with `r = 1 + 2t` odd and `s` in `Z/2`;
//! * `m = 8`: `p_8 = (6r/7) y`, `kappa = s y` with `r` odd and `s` in `Z/4`;
//! * `m = 2`: the complex projective plane, plus the Chern manifold as a
//!   separate descriptor (same cohomology, nonzero Kirby-Siebenmann class).
//!
//! Everything derived here (the top Pontrjagin class, the A-hat genus, the
//! smoothability residues, the homotopy-type counts) is computed from the
//! genus engine and the tables below; nothing downstream is hardcoded.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::abgroup::{self, FgAbGroup, GroupError, GroupMap, IntMatrix};
use crate::msq::{self, GradedPoly, MsqError, PontrjaginSymbol};
use crate::par::{self, Execution};
use crate::series::{self, int, rat, Rational, DEFAULT_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("unsupported dimension m = {0}; expected 2, 4 or 8")]
    UnsupportedDimension(u32),
    #[error("dimension mismatch: m = {0} vs m = {1}")]
    DimensionMismatch(u32, u32),
    #[error("r = {0} is even; model parameters require odd r")]
    EvenR(i64),
    #[error("invalid model descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("Pontrjagin range is only tabulated for k in {{1, 2}}, got {0}")]
    UnsupportedPontrjaginIndex(u32),
    #[error("homotopy-type counts disagree for m = {m}: {orbits} orbits vs {invariants} invariant classes")]
    CountMismatch { m: u32, orbits: u64, invariants: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Msq(#[from] MsqError),
}

/// Half the manifold dimension: the degree `m` of the middle cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HalfDim {
    Two,
    Four,
    Eight,
}

impl HalfDim {
    pub const ALL: [HalfDim; 3] = [HalfDim::Two, HalfDim::Four, HalfDim::Eight];

    pub fn m(self) -> u32 {
        match self {
            HalfDim::Two => 2,
            HalfDim::Four => 4,
            HalfDim::Eight => 8,
        }
    }

    /// Size of the exotic residue group: `Z/2` (ks) or `Z/4` (kappa).
    pub fn exotic_modulus(self) -> u8 {
        match self {
            HalfDim::Eight => 4,
            _ => 2,
        }
    }

    /// Weight of `p_m` as a Pontrjagin symbol (`m = 2` has no `p_m`).
    fn pm_weight(self) -> usize {
        (self.m() / 4) as usize
    }
}

impl TryFrom<u32> for HalfDim {
    type Error = ClassifyError;

    fn try_from(m: u32) -> Result<Self, ClassifyError> {
        match m {
            2 => Ok(HalfDim::Two),
            4 => Ok(HalfDim::Four),
            8 => Ok(HalfDim::Eight),
            _ => Err(ClassifyError::UnsupportedDimension(m)),
        }
    }
}

impl fmt::Display for HalfDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    /// `M_{r,s}`.
    Model { r: i64, s: u8 },
    /// The Chern manifold, `m = 2` only.
    Chern4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelDescriptor {
    dim: HalfDim,
    kind: ModelKind,
}

impl ModelDescriptor {
    /// `M_{r,s}`: `r` odd, `s` reduced into the exotic residue group. For
    /// `m = 2` only `(1, 0)` is a model; `(1, 1)` names the Chern manifold.
    pub fn new(dim: HalfDim, r: i64, s: i64) -> Result<Self, ClassifyError> {
        if r % 2 == 0 {
            return Err(ClassifyError::EvenR(r));
        }
        let modulus = dim.exotic_modulus() as i64;
        if !(0..modulus).contains(&s) {
            return Err(ClassifyError::InvalidDescriptor(format!("s = {s} is outside Z/{modulus}")));
        }
        let s = s as u8;
        if dim == HalfDim::Two {
            return match (r, s) {
                (1, 0) => Ok(Self::complex_projective_plane()),
                (1, 1) => Ok(Self::chern_manifold()),
                _ => Err(ClassifyError::InvalidDescriptor(format!(
                    "for m = 2 only r = 1 occurs (s = 0: CP^2, s = 1: Chern manifold), got r = {r}"
                ))),
            };
        }
        Ok(ModelDescriptor { dim, kind: ModelKind::Model { r, s } })
    }

    pub fn complex_projective_plane() -> Self {
        ModelDescriptor { dim: HalfDim::Two, kind: ModelKind::Model { r: 1, s: 0 } }
    }

    pub fn chern_manifold() -> Self {
        ModelDescriptor { dim: HalfDim::Two, kind: ModelKind::Chern4 }
    }

    pub fn quaternionic_projective_plane() -> Self {
        ModelDescriptor { dim: HalfDim::Four, kind: ModelKind::Model { r: 1, s: 0 } }
    }

    pub fn octonionic_projective_plane() -> Self {
        ModelDescriptor { dim: HalfDim::Eight, kind: ModelKind::Model { r: 7, s: 0 } }
    }

    pub fn dim(&self) -> HalfDim {
        self.dim
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// The Pontrjagin parameter; the Chern manifold shares `r = 1` with CP^2.
    pub fn r(&self) -> i64 {
        match self.kind {
            ModelKind::Model { r, .. } => r,
            ModelKind::Chern4 => 1,
        }
    }

    /// The exotic residue: ks for `m = 2, 4`, kappa for `m = 8`.
    pub fn s(&self) -> u8 {
        match self.kind {
            ModelKind::Model { s, .. } => s,
            ModelKind::Chern4 => 1,
        }
    }

    pub fn is_chern(&self) -> bool {
        self.kind == ModelKind::Chern4
    }

    /// Conventional name, when the model is a classical manifold.
    pub fn name(&self) -> Option<&'static str> {
        match (self.dim, self.kind) {
            (HalfDim::Two, ModelKind::Chern4) => Some("Ch^4"),
            (HalfDim::Two, _) => Some("CP^2"),
            (HalfDim::Four, ModelKind::Model { r: 1 | -1, s: 0 }) => Some("HP^2"),
            (HalfDim::Eight, ModelKind::Model { r: 7 | -7, s: 0 }) => Some("OP^2"),
            _ => None,
        }
    }
}

impl fmt::Display for ModelDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModelKind::Chern4 => write!(f, "Ch^4"),
            ModelKind::Model { r, s } => write!(f, "M_{{{r},{s}}} (m = {})", self.dim),
        }
    }
}

/// A named group together with where its value comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub name: &'static str,
    pub group: FgAbGroup,
    pub source: &'static str,
}

/// Homotopy-theoretic input groups, used as read-only data.
#[derive(Debug, Clone)]
pub struct HomotopyGroupTable {
    pub pi7_s4: TableEntry,
    pub pi15_s8: TableEntry,
    pub pi2_bg: TableEntry,
    pub pi4_bg: TableEntry,
    pub pi8_bg: TableEntry,
    pub pi3_top_o: TableEntry,
    pub pi7_top_o: TableEntry,
    pub theta8: TableEntry,
    pub theta16: TableEntry,
}

fn entry(name: &'static str, group: &str, source: &'static str) -> TableEntry {
    TableEntry { name, group: group.parse().expect("table group literal"), source }
}

static TABLE: LazyLock<HomotopyGroupTable> = LazyLock::new(|| HomotopyGroupTable {
    pi7_s4: entry("pi_7(S^4)", "Z + Z/12", "Toda, Composition Methods, Ch. XIV"),
    pi15_s8: entry("pi_15(S^8)", "Z + Z/120", "Toda, Composition Methods, Ch. XIV"),
    pi2_bg: entry("pi_2(BG)", "Z/2", "stable stem pi_1^s; Toda Ch. XIV"),
    pi4_bg: entry("pi_4(BG)", "Z/24", "stable stem pi_3^s; Toda Ch. XIV"),
    pi8_bg: entry("pi_8(BG)", "Z/240", "stable stem pi_7^s; Toda Ch. XIV"),
    pi3_top_o: entry("pi_3(TOP/O)", "Z/2", "Kirby-Siebenmann, p. 246"),
    pi7_top_o: entry("pi_7(TOP/O)", "Z/28", "Kirby-Siebenmann p. 200; Kervaire-Milnor"),
    theta8: entry("Theta_8", "Z/2", "Kervaire-Milnor, p. 504"),
    theta16: entry("Theta_16", "Z/2", "Kervaire-Milnor, p. 504"),
});

pub fn homotopy_table() -> &'static HomotopyGroupTable {
    &TABLE
}

impl HomotopyGroupTable {
    /// `pi_{2m-1}(S^m)` for `m = 4, 8`.
    pub fn unstable_sphere_group(&self, dim: HalfDim) -> Result<&TableEntry, ClassifyError> {
        match dim {
            HalfDim::Four => Ok(&self.pi7_s4),
            HalfDim::Eight => Ok(&self.pi15_s8),
            HalfDim::Two => Err(ClassifyError::UnsupportedDimension(2)),
        }
    }

    /// `pi_m(BG)`.
    pub fn stable_spherical_fibrations(&self, dim: HalfDim) -> &TableEntry {
        match dim {
            HalfDim::Two => &self.pi2_bg,
            HalfDim::Four => &self.pi4_bg,
            HalfDim::Eight => &self.pi8_bg,
        }
    }

    /// `pi_{m-1}(TOP/O)` for `m = 4, 8`.
    pub fn exotic_spheres_group(&self, dim: HalfDim) -> Result<&TableEntry, ClassifyError> {
        match dim {
            HalfDim::Four => Ok(&self.pi3_top_o),
            HalfDim::Eight => Ok(&self.pi7_top_o),
            HalfDim::Two => Err(ClassifyError::UnsupportedDimension(2)),
        }
    }

    /// `Theta_{2m}` for `m = 4, 8`.
    pub fn theta(&self, dim: HalfDim) -> Result<&TableEntry, ClassifyError> {
        match dim {
            HalfDim::Four => Ok(&self.theta8),
            HalfDim::Eight => Ok(&self.theta16),
            HalfDim::Two => Err(ClassifyError::UnsupportedDimension(2)),
        }
    }
}

/// Order of the cyclic torsion summand of a finite or `Z + Z/k` table group.
fn torsion_order(entry: &TableEntry) -> u64 {
    entry.group.torsion().iter().product()
}

/// The L- and A-hat polynomials the classification needs, computed once.
pub struct GenusTables {
    pub l4: GradedPoly,
    pub l8: GradedPoly,
    pub l16_sparse: GradedPoly,
    pub a_hat4: GradedPoly,
    pub a_hat8: GradedPoly,
    pub a_hat16_sparse: GradedPoly,
}

static GENERA: LazyLock<GenusTables> = LazyLock::new(|| {
    let l = series::l_genus_series(DEFAULT_ORDER);
    let a = series::a_hat_series(DEFAULT_ORDER);
    let sparse = [PontrjaginSymbol::of_weight(1), PontrjaginSymbol::of_weight(3)];
    let k = |f, n| msq::genus_polynomial(f, n).expect("default order covers weight 4");
    GenusTables {
        l4: k(&l, 1),
        l8: k(&l, 2),
        l16_sparse: k(&l, 4).with_zeroed(&sparse),
        a_hat4: k(&a, 1),
        a_hat8: k(&a, 2),
        a_hat16_sparse: k(&a, 4).with_zeroed(&sparse),
    }
});

pub fn genus_tables() -> &'static GenusTables {
    &GENERA
}

impl GenusTables {
    /// `L_{2m}` restricted to the classes a model can carry.
    pub fn l_top(&self, dim: HalfDim) -> &GradedPoly {
        match dim {
            HalfDim::Two => &self.l4,
            HalfDim::Four => &self.l8,
            HalfDim::Eight => &self.l16_sparse,
        }
    }

    pub fn a_hat_top(&self, dim: HalfDim) -> &GradedPoly {
        match dim {
            HalfDim::Two => &self.a_hat4,
            HalfDim::Four => &self.a_hat8,
            HalfDim::Eight => &self.a_hat16_sparse,
        }
    }
}

/// Pontrjagin classes of a model as numbers against `y_m` and `y_m^2`:
/// `p_m = pm * y_m`, `p_{2m} = p2m * y_m^2`. For `m = 2` there is no `p_m`
/// and only `p_4 = p2m * y_2^2` is present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PontrjaginData {
    pub pm: Option<Rational>,
    pub p2m: Rational,
}

impl PontrjaginData {
    pub fn assignment(&self, dim: HalfDim) -> BTreeMap<PontrjaginSymbol, Rational> {
        let top_weight = if dim == HalfDim::Two { 1 } else { 2 * dim.pm_weight() };
        let top = PontrjaginSymbol::of_weight(top_weight);
        let mut a = BTreeMap::new();
        a.insert(top, self.p2m.clone());
        if let Some(pm) = &self.pm {
            a.insert(PontrjaginSymbol::of_weight(dim.pm_weight()), pm.clone());
        }
        a
    }
}

/// Coefficient of `y_m` in `p_m` of the bundle with parameter `r`.
pub fn pm_coefficient(dim: HalfDim, r: i64) -> Option<Rational> {
    match dim {
        HalfDim::Two => None,
        HalfDim::Four => Some(int(2 * r)),
        HalfDim::Eight => Some(rat(6 * r, 7)),
    }
}

/// `p_{2m}` forced by `<L_{2m}, [M]> = 1` once `p_m` is known.
///
/// With only `p_m` and `p_{2m}` nonzero, `L_{2m} = a p_{2m} + b p_m^2`, so
/// `p_{2m} = (1 - b p_m^2) / a`.
pub fn top_pontrjagin_from_signature(dim: HalfDim, pm: Option<&Rational>) -> Rational {
    let l = genus_tables().l_top(dim);
    match (dim, pm) {
        (HalfDim::Two, _) => l.coefficient(&[1]).recip(),
        (_, Some(pm)) => {
            let w = dim.pm_weight();
            let mut top = vec![0; 2 * w];
            top[2 * w - 1] = 1;
            let mut square = vec![0; 2 * w];
            square[w - 1] = 2;
            let a = l.coefficient(&top);
            let b = l.coefficient(&square);
            (Rational::one() - b * pm * pm) / a
        }
        (_, None) => panic!("m = {} needs p_m", dim.m()),
    }
}

pub fn pontrjagin_data(d: &ModelDescriptor) -> PontrjaginData {
    let pm = pm_coefficient(d.dim, d.r());
    let p2m = top_pontrjagin_from_signature(d.dim, pm.as_ref());
    PontrjaginData { pm, p2m }
}

/// `<A-hat, [M]>` for a model.
pub fn a_hat_number(d: &ModelDescriptor) -> Rational {
    let data = pontrjagin_data(d);
    genus_tables()
        .a_hat_top(d.dim)
        .evaluate(&data.assignment(d.dim))
        .expect("assignment covers the model classes")
}

/// `<L_{2m}, [M]>`; 1 for every model.
pub fn signature_number(d: &ModelDescriptor) -> Rational {
    let data = pontrjagin_data(d);
    genus_tables().l_top(d.dim).evaluate(&data.assignment(d.dim)).expect("assignment covers the model classes")
}

/// Cohomology ring data of the Thom space of a bundle with Euler number `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub m: u32,
    /// `y_m^2 = relation_coefficient * y_{2m}`; equal to `|e|` once the
    /// generator `y_{2m}` is chosen with the sign of `y_m^2`.
    pub relation_coefficient: u64,
    pub euler_characteristic: Option<i64>,
    pub signature: Option<i64>,
    pub stiefel_whitney: Option<String>,
    pub wu_class: Option<String>,
}

impl CohomologyReport {
    pub fn relation(&self) -> String {
        let (m, two_m) = (self.m, 2 * self.m);
        match self.relation_coefficient {
            0 => format!("y{m}^2 = 0"),
            1 => format!("y{m}^2 = y{two_m}"),
            c => format!("y{m}^2 = {c}*y{two_m}"),
        }
    }
}

pub fn thom_cohomology(dim: HalfDim, euler: i64) -> CohomologyReport {
    let abs_e = euler.unsigned_abs();
    let manifold = abs_e == 1;
    let m = dim.m();
    CohomologyReport {
        m,
        relation_coefficient: abs_e,
        euler_characteristic: manifold.then_some(3),
        signature: manifold.then_some(1),
        stiefel_whitney: manifold.then(|| format!("1 + y{m} + y{m}^2")),
        wu_class: manifold.then(|| format!("1 + y{m} + y{m}^2")),
    }
}

/// An `R^m`-bundle over `S^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleDescriptor {
    pub dim: HalfDim,
    pub euler: i64,
    /// `<p_m, [S^m]>`; absent for `m = 2`.
    pub p_class: Option<Rational>,
    /// ks (`m = 4`), kappa (`m = 8`) or `w_2` (`m = 2`).
    pub exotic: u8,
}

/// Whether the data are realized by a bundle.
pub fn bundle_admissible(b: &BundleDescriptor) -> bool {
    if b.exotic >= b.dim.exotic_modulus() {
        return false;
    }
    let two_e = int(2 * b.euler.abs());
    let divisible_by_4 = |q: &Rational| q.is_integer() && q.to_integer().is_multiple_of(&BigInt::from(4));
    match (b.dim, &b.p_class) {
        (HalfDim::Two, _) => true,
        (HalfDim::Four, Some(p)) => {
            PontrjaginLattice::top(2).contains(p) && divisible_by_4(&(p + two_e))
        }
        (HalfDim::Eight, Some(p)) => {
            PontrjaginLattice::top(4).contains(p) && divisible_by_4(&(p * rat(7, 3) + two_e))
        }
        (_, None) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleCategory {
    Vect,
    Top,
}

/// The additive subgroup `generator * Z` of the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PontrjaginLattice {
    pub generator: Rational,
}

impl PontrjaginLattice {
    fn top(k: u32) -> Self {
        pontrjagin_range(k / 2, BundleCategory::Top).expect("k in {1, 2}")
    }

    pub fn contains(&self, q: &Rational) -> bool {
        (q / &self.generator).is_integer()
    }
}

impl fmt::Display for PontrjaginLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generator.is_integer() {
            write!(f, "{}Z", self.generator)
        } else {
            write!(f, "({})Z", self.generator)
        }
    }
}

/// Realizable values of `<p_{4k}, [S^{4k}]>`.
///
/// Vector bundles: `a * d_k * (2k-1)!` with `d_k = 2` for odd `k`, 1 for
/// even `k`. Topological bundles: `2Z` for `k = 1`, `(6/7)Z` for `k = 2`.
pub fn pontrjagin_range(k: u32, category: BundleCategory) -> Result<PontrjaginLattice, ClassifyError> {
    if !(1..=2).contains(&k) {
        return Err(ClassifyError::UnsupportedPontrjaginIndex(k));
    }
    let generator = match (category, k) {
        (BundleCategory::Vect, _) | (BundleCategory::Top, 1) => {
            let d = if k % 2 == 1 { 2 } else { 1 };
            let factorial: i64 = (1..=(2 * k as i64 - 1)).product();
            int(d * factorial)
        }
        (BundleCategory::Top, _) => rat(6, 7),
    };
    Ok(PontrjaginLattice { generator })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructureCount {
    pub admits: bool,
    pub count: u32,
}

/// `(admits, number of PL structures up to isotopy)`.
pub fn pl_structure(d: &ModelDescriptor) -> StructureCount {
    match (d.dim, d.kind) {
        (_, ModelKind::Chern4) => StructureCount { admits: false, count: 0 },
        (HalfDim::Four, ModelKind::Model { s, .. }) if s != 0 => StructureCount { admits: false, count: 0 },
        _ => StructureCount { admits: true, count: 1 },
    }
}

/// Denominator `D` of `A-hat[M] = t(t+1)/D` for the smoothable family,
/// read off from the genus engine at the first nontrivial member.
pub fn a_hat_denominator(dim: HalfDim) -> Result<u64, ClassifyError> {
    // t = 1 (m = 4: r = 3; m = 8: u = 1, r = 21), where t(t+1) = 2
    let probe = match dim {
        HalfDim::Four => ModelDescriptor::new(dim, 3, 0)?,
        HalfDim::Eight => ModelDescriptor::new(dim, 21, 0)?,
        HalfDim::Two => return Err(ClassifyError::UnsupportedDimension(2)),
    };
    let value = a_hat_number(&probe).abs();
    let d = int(2) / value;
    assert!(d.is_integer(), "A-hat at t = 1 is 2/D");
    Ok(d.to_integer().to_u64().expect("denominator fits"))
}

/// Closed form `t(t+1)/D` with `D` from [`a_hat_denominator`].
pub fn a_hat_closed_form(dim: HalfDim, t: i64) -> Result<Rational, ClassifyError> {
    let d = a_hat_denominator(dim)?;
    Ok(Rational::new(BigInt::from(t) * BigInt::from(t + 1), BigInt::from(d)))
}

/// Residues `t mod modulus` with `t(t+1) = 0 mod modulus`, ascending.
pub fn quadratic_residue_solutions(modulus: u64, exec: Execution) -> Vec<u64> {
    let candidates: Vec<u64> = (0..modulus).collect();
    let keep = par::map_collect(exec, &candidates, |&t| (t as u128 * (t as u128 + 1)) % modulus as u128 == 0);
    candidates.into_iter().zip(keep).filter_map(|(t, k)| k.then_some(t)).collect()
}

/// Modulus and residue set for the smoothability criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothResidues {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

static SMOOTH_RESIDUES: LazyLock<[SmoothResidues; 2]> = LazyLock::new(|| {
    [HalfDim::Four, HalfDim::Eight].map(|dim| {
        let modulus = a_hat_denominator(dim).expect("m = 4, 8");
        SmoothResidues { modulus, residues: quadratic_residue_solutions(modulus, Execution::default()) }
    })
});

pub fn smooth_residues(dim: HalfDim) -> Result<&'static SmoothResidues, ClassifyError> {
    match dim {
        HalfDim::Four => Ok(&SMOOTH_RESIDUES[0]),
        HalfDim::Eight => Ok(&SMOOTH_RESIDUES[1]),
        HalfDim::Two => Err(ClassifyError::UnsupportedDimension(2)),
    }
}

/// The integer `t` (`m = 4`, `r = 1 + 2t`) or `u` (`m = 8`, `r = 7(1 + 2u)`)
/// indexing the vector-bundle family, if the model belongs to it.
pub fn smooth_family_index(d: &ModelDescriptor) -> Option<i64> {
    match (d.dim, d.kind) {
        (HalfDim::Four, ModelKind::Model { r, .. }) => Some((r - 1).div_euclid(2)),
        (HalfDim::Eight, ModelKind::Model { r, .. }) if r % 7 == 0 => Some((r / 7 - 1).div_euclid(2)),
        _ => None,
    }
}

/// `(admits, upper bound on the number of DIFF structures)`.
///
/// For `m = 2` this reports the standard structure on CP^2 only; the
/// number of smoothings of CP^2 is not determined here.
pub fn diff_structure(d: &ModelDescriptor) -> StructureCount {
    match (d.dim, d.kind) {
        (_, ModelKind::Chern4) => StructureCount { admits: false, count: 0 },
        (HalfDim::Two, _) => StructureCount { admits: true, count: 1 },
        (dim, ModelKind::Model { s, .. }) => {
            let admits = s == 0
                && smooth_family_index(d).is_some_and(|t| {
                    let sr = smooth_residues(dim).expect("m = 4, 8");
                    sr.residues.contains(&(t.rem_euclid(sr.modulus as i64) as u64))
                });
            let theta = homotopy_table().theta(dim).expect("m = 4, 8");
            let count = if admits { theta.group.order().expect("finite") as u32 } else { 0 };
            StructureCount { admits, count }
        }
    }
}

/// Characteristic numbers separating oriented bordism classes:
/// `(<p_m^2, [M]>, ks^2)` for `m = 4`, `(<p_8^2, [M]>, q8 kappa)` for
/// `m = 8`, `(<p_4, [M]>, ks)` for `m = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BordismInvariants {
    pub pontrjagin_number: Rational,
    pub exotic: u8,
    pub exotic_modulus: u8,
}

impl fmt::Display for BordismInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {} mod {})", self.pontrjagin_number, self.exotic, self.exotic_modulus)
    }
}

/// `q_8 kappa` in `Z/4`, with `q_8 = (7/6) p_8` an odd multiple of `y_8`.
pub fn q8_kappa(d: &ModelDescriptor) -> Option<u8> {
    if d.dim != HalfDim::Eight {
        return None;
    }
    let q8 = pm_coefficient(d.dim, d.r()).expect("m = 8") * rat(7, 6);
    assert!(q8.is_integer());
    let q8 = q8.to_integer().mod_floor(&BigInt::from(4)).to_u8().expect("< 4");
    Some((q8 * d.s()) % 4)
}

pub fn bordism_invariants(d: &ModelDescriptor) -> BordismInvariants {
    let data = pontrjagin_data(d);
    match d.dim {
        HalfDim::Two => BordismInvariants { pontrjagin_number: data.p2m, exotic: d.s(), exotic_modulus: 2 },
        HalfDim::Four => {
            let pm = data.pm.expect("m = 4");
            BordismInvariants { pontrjagin_number: &pm * &pm, exotic: (d.s() * d.s()) % 2, exotic_modulus: 2 }
        }
        HalfDim::Eight => {
            let pm = data.pm.expect("m = 8");
            BordismInvariants {
                pontrjagin_number: &pm * &pm,
                exotic: q8_kappa(d).expect("m = 8"),
                exotic_modulus: 4,
            }
        }
    }
}

fn same_dim(a: &ModelDescriptor, b: &ModelDescriptor) -> Result<(), ClassifyError> {
    if a.dim != b.dim {
        return Err(ClassifyError::DimensionMismatch(a.dim.m(), b.dim.m()));
    }
    Ok(())
}

/// `m = 2`: same kind; `m = 4`: `(r, s) = (+-r', s')`; `m = 8`:
/// `(r, s) = +-(r', s')` with `s` negated in `Z/4`.
pub fn homeomorphic(a: &ModelDescriptor, b: &ModelDescriptor) -> Result<bool, ClassifyError> {
    same_dim(a, b)?;
    let (ra, sa, rb, sb) = (a.r(), a.s(), b.r(), b.s());
    Ok(match a.dim {
        HalfDim::Two => a.kind == b.kind,
        HalfDim::Four => ra.abs() == rb.abs() && sa == sb,
        HalfDim::Eight => (ra == rb && sa == sb) || (ra == -rb && sa == (4 - sb) % 4),
    })
}

/// Modulus and multiplier of the homotopy congruence: `r + c s mod n`.
fn homotopy_congruence(dim: HalfDim) -> Option<(i64, i64)> {
    let n = torsion_order(homotopy_table().stable_spherical_fibrations(dim)) as i64;
    match dim {
        HalfDim::Two => None,
        // the exotic class moves the J-image by half (m = 4) or a quarter (m = 8) of pi_m(BG)
        HalfDim::Four => Some((n, n / 2)),
        HalfDim::Eight => Some((n, n / 4)),
    }
}

/// Canonical residue of `r + 12 s mod 24` (`m = 4`) or `r + 60 s mod 240`
/// (`m = 8`) up to sign; 0 for `m = 2`.
pub fn homotopy_invariant(d: &ModelDescriptor) -> u64 {
    match homotopy_congruence(d.dim) {
        None => 0,
        Some((n, c)) => {
            let v = (d.r() + c * d.s() as i64).rem_euclid(n);
            v.min((n - v) % n) as u64
        }
    }
}

pub fn homotopy_equivalent(a: &ModelDescriptor, b: &ModelDescriptor) -> Result<bool, ClassifyError> {
    same_dim(a, b)?;
    Ok(homotopy_invariant(a) == homotopy_invariant(b))
}

/// Orbits of the involution `j -> -1 - j` on `Z/k`.
pub fn involution_orbits(k: u64) -> u64 {
    let mut seen = vec![false; k as usize];
    let mut orbits = 0;
    for j in 0..k {
        if seen[j as usize] {
            continue;
        }
        orbits += 1;
        let partner = (k - 1 - j) % k;
        seen[j as usize] = true;
        seen[partner as usize] = true;
    }
    orbits
}

/// Both counts of homotopy types: `(orbit method, invariant method)`.
pub fn homotopy_type_counts(dim: HalfDim, exec: Execution) -> (u64, u64) {
    if dim == HalfDim::Two {
        return (1, 1);
    }
    let k = torsion_order(homotopy_table().unstable_sphere_group(dim).expect("m = 4, 8"));
    let orbits = involution_orbits(k);

    let (n, _) = homotopy_congruence(dim).expect("m = 4, 8");
    let grid: Vec<(i64, i64)> = (1..2 * n)
        .step_by(2)
        .flat_map(|r| (0..dim.exotic_modulus() as i64).map(move |s| (r, s)))
        .collect();
    let classes = par::map_collect(exec, &grid, |&(r, s)| {
        homotopy_invariant(&ModelDescriptor::new(dim, r, s).expect("odd r"))
    });
    let distinct: BTreeSet<u64> = classes.into_iter().collect();
    (orbits, distinct.len() as u64)
}

/// Number of homotopy types of models, after cross-checking both methods.
pub fn count_homotopy_types(dim: HalfDim) -> Result<u64, ClassifyError> {
    let (orbits, invariants) = homotopy_type_counts(dim, Execution::default());
    if orbits != invariants {
        return Err(ClassifyError::CountMismatch { m: dim.m(), orbits, invariants });
    }
    Ok(orbits)
}

/// Full invariant record of one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub descriptor: ModelDescriptor,
    pub name: Option<&'static str>,
    pub p_m: Option<Rational>,
    pub p_2m: Rational,
    pub pm_squared: Option<Rational>,
    pub a_hat: Rational,
    pub ks_or_kappa: u8,
    pub q8_kappa: Option<u8>,
    pub homotopy_class: u64,
    pub pl: StructureCount,
    pub diff: StructureCount,
    pub psc: bool,
    pub bordism: BordismInvariants,
    pub cohomology: CohomologyReport,
    pub notes: Vec<&'static str>,
}

pub fn model_invariants(d: &ModelDescriptor) -> InvariantReport {
    let data = pontrjagin_data(d);
    let a_hat = a_hat_number(d);
    let diff = diff_structure(d);
    let mut notes = Vec::new();
    let psc = match (d.dim, d.kind) {
        (HalfDim::Two, ModelKind::Model { .. }) => {
            notes.push("p_4 = 3 y_2^2 is forced by signature 1 and L_4 = p_4/3");
            notes.push("CP^2 is not spin; positive scalar curvature from the Fubini-Study metric");
            notes.push("number of PL and DIFF structures on CP^2 is not determined");
            true
        }
        (HalfDim::Two, ModelKind::Chern4) => {
            notes.push("nonzero Kirby-Siebenmann class; homotopy equivalent to CP^2");
            false
        }
        _ => diff.admits && a_hat.is_zero(),
    };
    InvariantReport {
        descriptor: *d,
        name: d.name(),
        pm_squared: data.pm.as_ref().map(|pm| pm * pm),
        p_m: data.pm,
        p_2m: data.p2m,
        a_hat,
        ks_or_kappa: d.s(),
        q8_kappa: q8_kappa(d),
        homotopy_class: homotopy_invariant(d),
        pl: pl_structure(d),
        diff,
        psc,
        bordism: bordism_invariants(d),
        cohomology: thom_cohomology(d.dim, 1),
        notes,
    }
}

/// Rows of an enumeration plus the inputs that were rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub rows: Vec<InvariantReport>,
    pub rejected: Vec<(i64, ClassifyError)>,
}

/// Invariant reports for every `(r, s)` with `r` from `rs` and `s` over the
/// exotic residues, sorted by `r` then `s`. For `m = 2` the `rs` are
/// ignored and the two manifolds CP^2 and Ch^4 are listed.
pub fn enumerate_models(dim: HalfDim, rs: &[i64], exec: Execution) -> Enumeration {
    let (descriptors, rejected): (Vec<ModelDescriptor>, Vec<(i64, ClassifyError)>) = if dim == HalfDim::Two {
        (vec![ModelDescriptor::complex_projective_plane(), ModelDescriptor::chern_manifold()], vec![])
    } else {
        let mut unique: Vec<i64> = rs.to_vec();
        unique.sort_unstable();
        unique.dedup();
        let mut ok = Vec::new();
        let mut bad = Vec::new();
        for r in unique {
            if r % 2 == 0 {
                bad.push((r, ClassifyError::EvenR(r)));
                continue;
            }
            for s in 0..dim.exotic_modulus() as i64 {
                ok.push(ModelDescriptor::new(dim, r, s).expect("odd r, s in range"));
            }
        }
        (ok, bad)
    };
    let rows = par::map_collect(exec, &descriptors, model_invariants);
    Enumeration { rows, rejected }
}

/// Bottom row `0 -> Z -> pi_{2m-1}(S^m) -> pi_m(BG) -> 0` with the given
/// image of the generator, and the surjection `(a, b) -> a + 2b`.
pub fn splitting_sequence(dim: HalfDim, iota: [i64; 2]) -> Result<Vec<GroupMap>, ClassifyError> {
    let table = homotopy_table();
    let middle = table.unstable_sphere_group(dim)?.group.clone();
    let quotient = table.stable_spherical_fibrations(dim).group.clone();
    let z = FgAbGroup::free(1);
    let inclusion = GroupMap::new(z.clone(), middle.clone(), IntMatrix::from_rows(&[[iota[0]], [iota[1]]]))?;
    let projection = GroupMap::new(middle, quotient.clone(), IntMatrix::from_rows(&[[1, 2]]))?;
    Ok(vec![GroupMap::from_trivial(z), inclusion, projection, GroupMap::to_trivial(quotient)])
}

/// Exactness of the bottom row before and after tensoring with `Z/(m/2)`,
/// and that the generator's image keeps order `m/2` after tensoring.
pub fn splitting_holds(dim: HalfDim, iota: [i64; 2]) -> Result<bool, ClassifyError> {
    let n = (dim.m() / 2) as u64;
    let seq = splitting_sequence(dim, iota)?;
    if !abgroup::is_exact(&seq)? {
        return Ok(false);
    }
    let tensored: Vec<GroupMap> = seq.iter().map(|f| f.tensor_cyclic(n)).collect::<Result<_, _>>()?;
    if !abgroup::is_exact(&tensored)? {
        return Ok(false);
    }
    Ok(abgroup::element_order_after_tensor(&seq[1], &iota, n)? == n)
}

/// The generator of `pi_m(S^m)` maps to `(2, -1)`.
pub fn verify_splitting(dim: HalfDim) -> Result<bool, ClassifyError> {
    splitting_holds(dim, [2, -1])
}

/// Constraints pinning the torsion of `pi_m(BTOP)`: it embeds in both
/// `pi_{m-1}(TOP/O)` and `pi_m(BG)`, and tensoring with `Z/(m/2)` keeps it.
pub fn stable_torsion_constraints(dim: HalfDim) -> Result<Vec<abgroup::TorsionConstraint>, ClassifyError> {
    let table = homotopy_table();
    let a = torsion_order(table.exotic_spheres_group(dim)?);
    let b = torsion_order(table.stable_spherical_fibrations(dim));
    let n = (dim.m() / 2) as u64;
    Ok(vec![
        abgroup::TorsionConstraint::EmbedsIn(a.gcd(&b)),
        abgroup::TorsionConstraint::TensorIsomorphic(n, FgAbGroup::cyclic(n)),
        abgroup::TorsionConstraint::OrderAtMost(abgroup::DEFAULT_ORDER_BOUND),
    ])
}

// ---- rendering ----

struct JsonRational<'a>(&'a Rational);

fn json_int(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

impl Serialize for JsonRational<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("num", &json_int(self.0.numer()))?;
        map.serialize_entry("den", &json_int(self.0.denom()))?;
        map.end()
    }
}

#[derive(Serialize)]
struct DiffJson {
    admits: bool,
    max_count: u32,
}

#[derive(Serialize)]
struct BordismJson<'a> {
    pontrjagin_number: JsonRational<'a>,
    exotic: u8,
    exotic_modulus: u8,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    m: u32,
    kind: &'static str,
    name: Option<&'static str>,
    r: Option<i64>,
    s: u8,
    p_m: Option<JsonRational<'a>>,
    p_2m: JsonRational<'a>,
    pm_squared: Option<JsonRational<'a>>,
    a_hat: JsonRational<'a>,
    q8_kappa: Option<u8>,
    homotopy_class: u64,
    pl: StructureCount,
    diff: DiffJson,
    psc: bool,
    bordism: BordismJson<'a>,
    notes: &'a [&'static str],
}

/// Column order shared by JSON, CSV and markdown output.
pub const REPORT_COLUMNS: [&str; 17] = [
    "m",
    "kind",
    "name",
    "r",
    "s",
    "p_m",
    "p_2m",
    "pm_squared",
    "a_hat",
    "q8_kappa",
    "homotopy_class",
    "pl_admits",
    "pl_count",
    "diff_admits",
    "diff_max_count",
    "psc",
    "bordism",
];

impl InvariantReport {
    fn kind_label(&self) -> &'static str {
        if self.descriptor.is_chern() { "chern4" } else { "model" }
    }

    fn r_field(&self) -> Option<i64> {
        (!self.descriptor.is_chern()).then(|| self.descriptor.r())
    }

    fn json_view(&self) -> ReportJson<'_> {
        ReportJson {
            m: self.descriptor.dim.m(),
            kind: self.kind_label(),
            name: self.name,
            r: self.r_field(),
            s: self.ks_or_kappa,
            p_m: self.p_m.as_ref().map(JsonRational),
            p_2m: JsonRational(&self.p_2m),
            pm_squared: self.pm_squared.as_ref().map(JsonRational),
            a_hat: JsonRational(&self.a_hat),
            q8_kappa: self.q8_kappa,
            homotopy_class: self.homotopy_class,
            pl: self.pl,
            diff: DiffJson { admits: self.diff.admits, max_count: self.diff.count },
            psc: self.psc,
            bordism: BordismJson {
                pontrjagin_number: JsonRational(&self.bordism.pontrjagin_number),
                exotic: self.bordism.exotic,
                exotic_modulus: self.bordism.exotic_modulus,
            },
            notes: &self.notes,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.json_view()).expect("report serializes")
    }

    /// Flat cells in [`REPORT_COLUMNS`] order.
    pub fn cells(&self) -> Vec<String> {
        let opt = |q: &Option<Rational>| q.as_ref().map_or(String::new(), Rational::to_string);
        vec![
            self.descriptor.dim.m().to_string(),
            self.kind_label().to_string(),
            self.name.unwrap_or("").to_string(),
            self.r_field().map_or(String::new(), |r| r.to_string()),
            self.ks_or_kappa.to_string(),
            opt(&self.p_m),
            self.p_2m.to_string(),
            opt(&self.pm_squared),
            self.a_hat.to_string(),
            self.q8_kappa.map_or(String::new(), |q| q.to_string()),
            self.homotopy_class.to_string(),
            self.pl.admits.to_string(),
            self.pl.count.to_string(),
            self.diff.admits.to_string(),
            self.diff.count.to_string(),
            self.psc.to_string(),
            self.bordism.to_string(),
        ]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (col, cell) in REPORT_COLUMNS.iter().zip(self.cells()) {
            out.push_str(&format!("{col:>15}: {cell}\n"));
        }
        out.push_str(&format!("{:>15}: {}\n", "cohomology", self.cohomology.relation()));
        for note in &self.notes {
            out.push_str(&format!("{:>15}: {note}\n", "note"));
        }
        out
    }
}

impl Serialize for InvariantReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.json_view().serialize(serializer)
    }
}

pub fn render_json(rows: &[InvariantReport]) -> String {
    serde_json::to_string_pretty(rows).expect("reports serialize")
}

pub fn render_csv(rows: &[InvariantReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_COLUMNS).expect("in-memory write");
    for row in rows {
        w.write_record(row.cells()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 cells")
}

pub fn render_markdown(rows: &[InvariantReport]) -> String {
    let mut out = format!("| {} |\n", REPORT_COLUMNS.join(" | "));
    out.push_str(&format!("|{}\n", "---|".repeat(REPORT_COLUMNS.len())));
    for row in rows {
        out.push_str(&format!("| {} |\n", row.cells().join(" | ")));
    }
    out
}
