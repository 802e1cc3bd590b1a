//! Multiplicative sequences.
//!
//! For a series `f` with `f(0) = 1`, the weight-`n` polynomial `K_n` is the
//! weight-`n` part of `f(x_1) ... f(x_n)` written in the elementary
//! symmetric functions of the `x_i`, with `sigma_j` renamed to the
//! Pontrjagin symbol `p_{4j}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{int, s_numbers, PowerSeries, Rational, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MsqError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("term {monomial} has weight {found}, polynomial is declared of weight {declared}")]
    NotHomogeneous { monomial: String, declared: usize, found: usize },
    #[error("expansion is not symmetric: {0}")]
    SymmetryViolation(String),
    #[error("unbound symbol {0}")]
    UnboundSymbol(PontrjaginSymbol),
    #[error("invalid Pontrjagin symbol {0:?}; expected p4, p8, p12, ...")]
    InvalidSymbol(String),
}

/// The Pontrjagin class `p_{4k}`, named by its cohomological degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PontrjaginSymbol(u32);

impl PontrjaginSymbol {
    /// Symbol of weight `k >= 1`, i.e. `p_{4k}`.
    pub fn of_weight(k: usize) -> Self {
        assert!(k >= 1, "Pontrjagin symbols start at p4");
        PontrjaginSymbol(4 * k as u32)
    }

    pub fn degree(self) -> u32 {
        self.0
    }

    pub fn weight(self) -> usize {
        (self.0 / 4) as usize
    }

    fn index(self) -> usize {
        self.weight() - 1
    }
}

impl fmt::Display for PontrjaginSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

impl FromStr for PontrjaginSymbol {
    type Err = MsqError;

    fn from_str(s: &str) -> Result<Self, MsqError> {
        let bad = || MsqError::InvalidSymbol(s.to_string());
        let degree: u32 = s.trim().strip_prefix('p').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if degree == 0 || degree % 4 != 0 {
            return Err(bad());
        }
        Ok(PontrjaginSymbol(degree))
    }
}

/// Monomial `p4^e1 p8^e2 ...`: entry `j` is the exponent of `p_{4(j+1)}`.
type Exponents = Vec<u32>;

fn exponent_weight(e: &[u32]) -> usize {
    e.iter().enumerate().map(|(j, &a)| (j + 1) * a as usize).sum()
}

fn render_monomial(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(j, &a)| {
            let sym = PontrjaginSymbol::of_weight(j + 1);
            if a == 1 { sym.to_string() } else { format!("{sym}^{a}") }
        })
        .collect();
    if parts.is_empty() { "1".to_string() } else { parts.join("*") }
}

/// Homogeneous polynomial in the Pontrjagin symbols, `weight(p_{4k}) = k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPoly {
    weight: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl GradedPoly {
    pub fn zero(weight: usize) -> Self {
        GradedPoly { weight, terms: BTreeMap::new() }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials and dropping zeros. Every term must have weight
    /// `weight`.
    pub fn from_terms<I>(weight: usize, terms: I) -> Result<Self, MsqError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut poly = GradedPoly::zero(weight);
        for (exps, c) in terms {
            let found = exponent_weight(&exps);
            if found != weight {
                return Err(MsqError::NotHomogeneous { monomial: render_monomial(&exps), declared: weight, found });
            }
            poly.add_term(normalize(exps, weight), c);
        }
        Ok(poly)
    }

    fn add_term(&mut self, key: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with the given exponents (zero if absent).
    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        if exponent_weight(exps) != self.weight {
            return Rational::zero();
        }
        self.terms.get(&normalize(exps.to_vec(), self.weight)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Symbols that occur with a nonzero exponent somewhere.
    pub fn symbols(&self) -> Vec<PontrjaginSymbol> {
        let mut seen = vec![false; self.weight];
        for exps in self.terms.keys() {
            for (j, &a) in exps.iter().enumerate() {
                if a > 0 {
                    seen[j] = true;
                }
            }
        }
        seen.iter().enumerate().filter(|(_, &s)| s).map(|(j, _)| PontrjaginSymbol::of_weight(j + 1)).collect()
    }

    /// Substitutes zero for each listed symbol.
    pub fn with_zeroed(&self, symbols: &[PontrjaginSymbol]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(exps, _)| symbols.iter().all(|s| exps.get(s.index()).copied().unwrap_or(0) == 0))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        GradedPoly { weight: self.weight, terms }
    }

    /// Exact value under the assignment.
    pub fn evaluate(&self, assignment: &BTreeMap<PontrjaginSymbol, Rational>) -> Result<Rational, MsqError> {
        evaluate_genus(self, assignment)
    }
}

fn normalize(mut exps: Vec<u32>, weight: usize) -> Exponents {
    exps.resize(weight.max(exps.iter().rposition(|&a| a > 0).map_or(0, |i| i + 1)), 0);
    exps
}

impl fmt::Display for GradedPoly {
    /// `(7/45)*p8 + (-1/45)*p4^2`: higher symbols first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.iter().rev().cmp(a.iter().rev()));
        let rendered: Vec<String> = keys
            .into_iter()
            .map(|k| {
                let c = &self.terms[k];
                if k.iter().all(|&a| a == 0) { format!("({c})") } else { format!("({c})*{}", render_monomial(k)) }
            })
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

/// Polynomial in auxiliary variables `x_1 .. x_n` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricExpansion {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl SymmetricExpansion {
    pub fn zero(nvars: usize) -> Self {
        SymmetricExpansion { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        let mut e = Self::zero(nvars);
        e.terms.insert(vec![0; nvars], Rational::one());
        e
    }

    /// Terms given as exponent vectors of length `nvars`.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut e = Self::zero(nvars);
        for (mut exps, c) in terms {
            assert!(exps.len() <= nvars, "monomial has more variables than the expansion");
            exps.resize(nvars, 0);
            e.add_term(exps, c);
        }
        e
    }

    fn add_term(&mut self, key: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// `x_1 ... x_j` summed over all `j`-subsets.
    pub fn elementary(nvars: usize, j: usize) -> Self {
        let mut e = Self::zero(nvars);
        if j > nvars {
            return e;
        }
        for mask in 0u64..(1u64 << nvars) {
            if mask.count_ones() as usize == j {
                let exps = (0..nvars).map(|i| ((mask >> i) & 1) as u32).collect();
                e.terms.insert(exps, Rational::one());
            }
        }
        e
    }

    /// `f(x_1) f(x_2) ... f(x_n)`, keeping total degree at most `max_degree`.
    pub fn product_of_series(f: &PowerSeries, nvars: usize, max_degree: usize) -> Self {
        let mut acc = Self::one(nvars);
        for var in 0..nvars {
            let mut next = Self::zero(nvars);
            for (exps, c) in &acc.terms {
                let used: usize = exps.iter().map(|&a| a as usize).sum();
                for (k, fk) in f.coefficients().iter().enumerate().take(max_degree - used + 1) {
                    let mut e = exps.clone();
                    e[var] += k as u32;
                    next.add_term(e, c * fk);
                }
            }
            acc = next;
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), -v);
        }
        out
    }

    pub fn homogeneous_part(&self, degree: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().map(|&a| a as usize).sum::<usize>() == degree)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        SymmetricExpansion { nvars: self.nvars, terms }
    }

    /// Checks invariance under the adjacent transpositions, which generate
    /// the full symmetric group.
    pub fn check_symmetric(&self) -> Result<(), MsqError> {
        for (exps, c) in &self.terms {
            for i in 0..self.nvars.saturating_sub(1) {
                let mut swapped = exps.clone();
                swapped.swap(i, i + 1);
                let other = self.coefficient(&swapped);
                if &other != c {
                    return Err(MsqError::SymmetryViolation(format!(
                        "coefficient of x^{exps:?} is {c} but of x^{swapped:?} is {other}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().map(|&a| a as usize).sum()).max()
    }
}

/// Rewrites a homogeneous symmetric polynomial in the elementary symmetric
/// functions, with `sigma_j` reported as `p_{4j}`.
///
/// Triangular elimination: the lexicographically leading monomial
/// `x^a` (necessarily with `a_1 >= a_2 >= ...`) is removed by subtracting
/// `c * sigma_1^{a_1-a_2} sigma_2^{a_2-a_3} ...`, whose own leading
/// monomial is `x^a`.
pub fn elementary_symmetric_decompose(expansion: &SymmetricExpansion) -> Result<GradedPoly, MsqError> {
    expansion.check_symmetric()?;
    let n = expansion.nvars;
    let degree = expansion.total_degree().unwrap_or(0);
    if let Some((exps, _)) = expansion.terms.iter().find(|(e, _)| e.iter().map(|&a| a as usize).sum::<usize>() != degree) {
        return Err(MsqError::NotHomogeneous {
            monomial: format!("x^{exps:?}"),
            declared: degree,
            found: exps.iter().map(|&a| a as usize).sum(),
        });
    }
    let elementary: Vec<SymmetricExpansion> = (0..=n).map(|j| SymmetricExpansion::elementary(n, j)).collect();

    let mut rest = expansion.clone();
    let mut out = GradedPoly::zero(degree);
    while let Some((lead, c)) = rest.terms.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
        let mut sigma_exps = vec![0u32; degree.max(n)];
        let mut product = SymmetricExpansion::one(n);
        for j in 0..n {
            let next = if j + 1 < n { lead[j + 1] } else { 0 };
            let e = lead[j].checked_sub(next).ok_or_else(|| {
                MsqError::SymmetryViolation(format!("leading monomial x^{lead:?} is not non-increasing"))
            })?;
            sigma_exps[j] = e;
            for _ in 0..e {
                product = product.mul(&elementary[j + 1]);
            }
        }
        let scaled = SymmetricExpansion {
            nvars: n,
            terms: product.terms.into_iter().map(|(k, v)| (k, v * &c)).collect(),
        };
        rest = rest.sub(&scaled);
        out.add_term(normalize(sigma_exps, degree), c);
    }
    Ok(out)
}

/// Re-expands a polynomial in the `p_{4j}` (read as `sigma_j`) in `nvars`
/// auxiliary variables.
pub fn expand_elementary(poly: &GradedPoly, nvars: usize) -> SymmetricExpansion {
    let elementary: Vec<SymmetricExpansion> = (0..=poly.weight.max(nvars))
        .map(|j| SymmetricExpansion::elementary(nvars, j))
        .collect();
    let mut out = SymmetricExpansion::zero(nvars);
    for (exps, c) in &poly.terms {
        let mut product = SymmetricExpansion::one(nvars);
        for (j, &a) in exps.iter().enumerate() {
            for _ in 0..a {
                product = product.mul(&elementary[j + 1]);
            }
        }
        for (k, v) in product.terms {
            out.add_term(k, v * c);
        }
    }
    out
}

/// `K_n` of the multiplicative sequence of `f`, in `p4 .. p_{4n}`.
pub fn genus_polynomial(f: &PowerSeries, n: usize) -> Result<GradedPoly, MsqError> {
    if f.order() < n {
        return Err(SeriesError::Truncation { needed: n, available: f.order() }.into());
    }
    if !f.constant_term().is_one() {
        return Err(SeriesError::NotGenusSeries(f.constant_term().to_string()).into());
    }
    if n == 0 {
        return GradedPoly::from_terms(0, [(vec![], Rational::one())]);
    }
    let product = SymmetricExpansion::product_of_series(f, n, n);
    let mut poly = elementary_symmetric_decompose(&product.homogeneous_part(n))?;
    poly.weight = n;
    Ok(poly)
}

/// `(coefficient of p_{8k}, coefficient of p_{4k}^2)` in `K_{2k}` when every
/// other Pontrjagin class vanishes: `(s_{2k}, (s_k^2 - s_{2k})/2)`.
pub fn two_point_genus(f: &PowerSeries, k: usize) -> Result<(Rational, Rational), MsqError> {
    assert!(k >= 1, "two-class formula needs k >= 1");
    let s = s_numbers(f, 2 * k)?;
    let s_k = &s[k - 1];
    let s_2k = &s[2 * k - 1];
    let square = (s_k * s_k - s_2k) / int(2);
    Ok((s_2k.clone(), square))
}

/// Exact value of `poly` with each symbol replaced by its assigned value.
pub fn evaluate_genus(
    poly: &GradedPoly,
    assignment: &BTreeMap<PontrjaginSymbol, Rational>,
) -> Result<Rational, MsqError> {
    let mut values: Vec<Option<&Rational>> = vec![None; poly.weight];
    for sym in poly.symbols() {
        values[sym.index()] = Some(assignment.get(&sym).ok_or(MsqError::UnboundSymbol(sym))?);
    }
    let mut total = Rational::zero();
    for (exps, c) in &poly.terms {
        let mut term = c.clone();
        for (j, &a) in exps.iter().enumerate() {
            if a > 0 {
                let v = values[j].expect("bound above");
                for _ in 0..a {
                    term *= v;
                }
            }
        }
        total += term;
    }
    Ok(total)
}

/// Convenience for building assignments: `[(p4, 2), (p8, 7)]`.
pub fn assignment<I>(pairs: I) -> BTreeMap<PontrjaginSymbol, Rational>
where
    I: IntoIterator<Item = (PontrjaginSymbol, Rational)>,
{
    pairs.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{a_hat_series, l_genus_series, rat, DEFAULT_ORDER};

    fn p(k: usize) -> PontrjaginSymbol {
        PontrjaginSymbol::of_weight(k)
    }

    fn poly(weight: usize, terms: &[(&[u32], Rational)]) -> GradedPoly {
        GradedPoly::from_terms(weight, terms.iter().map(|(e, c)| (e.to_vec(), c.clone()))).unwrap()
    }

    #[test]
    fn symbol_parsing() {
        assert_eq!("p12".parse::<PontrjaginSymbol>().unwrap(), p(3));
        assert!("p6".parse::<PontrjaginSymbol>().is_err());
        assert!("q4".parse::<PontrjaginSymbol>().is_err());
        assert!("p0".parse::<PontrjaginSymbol>().is_err());
    }

    #[test]
    fn low_weight_l_and_a_hat() {
        let l = l_genus_series(DEFAULT_ORDER);
        let a = a_hat_series(DEFAULT_ORDER);
        assert_eq!(genus_polynomial(&l, 1).unwrap(), poly(1, &[(&[1], rat(1, 3))]));
        assert_eq!(genus_polynomial(&a, 1).unwrap(), poly(1, &[(&[1], rat(-1, 24))]));
        assert_eq!(
            genus_polynomial(&l, 2).unwrap(),
            poly(2, &[(&[0, 1], rat(7, 45)), (&[2, 0], rat(-1, 45))])
        );
        assert_eq!(
            genus_polynomial(&a, 2).unwrap(),
            poly(2, &[(&[0, 1], rat(-4, 5760)), (&[2, 0], rat(7, 5760))])
        );
    }

    #[test]
    fn weight_four_sparse_restriction() {
        let zeroed = [p(1), p(3)];
        let l16 = genus_polynomial(&l_genus_series(DEFAULT_ORDER), 4).unwrap().with_zeroed(&zeroed);
        assert_eq!(l16, poly(4, &[(&[0, 0, 0, 1], rat(381, 14175)), (&[0, 2, 0, 0], rat(-19, 14175))]));
        let a16 = genus_polynomial(&a_hat_series(DEFAULT_ORDER), 4).unwrap().with_zeroed(&zeroed);
        assert_eq!(
            a16,
            poly(4, &[(&[0, 0, 0, 1], rat(-12, 29030400)), (&[0, 2, 0, 0], rat(13, 29030400))])
        );
    }

    #[test]
    fn constant_series_has_zero_genus() {
        for n in 1..=4 {
            assert!(genus_polynomial(&PowerSeries::one(4), n).unwrap().is_zero());
        }
        assert_eq!(genus_polynomial(&PowerSeries::one(0), 0).unwrap().to_string(), "(1)");
    }

    #[test]
    fn genus_polynomial_needs_enough_order() {
        let l = l_genus_series(2);
        assert!(matches!(genus_polynomial(&l, 3), Err(MsqError::Series(SeriesError::Truncation { .. }))));
    }

    #[test]
    fn two_point_values() {
        let l = l_genus_series(DEFAULT_ORDER);
        let a = a_hat_series(DEFAULT_ORDER);
        assert_eq!(two_point_genus(&l, 1).unwrap(), (rat(7, 45), rat(-1, 45)));
        assert_eq!(two_point_genus(&a, 2).unwrap(), (rat(-1, 2419200), rat(13, 29030400)));
        assert_eq!(two_point_genus(&PowerSeries::one(4), 2).unwrap(), (rat(0, 1), rat(0, 1)));
    }

    #[test]
    fn evaluation() {
        let l8 = genus_polynomial(&l_genus_series(DEFAULT_ORDER), 2).unwrap();
        assert_eq!(evaluate_genus(&l8, &assignment([(p(1), rat(2, 1)), (p(2), rat(7, 1))])).unwrap(), rat(1, 1));
        assert_eq!(evaluate_genus(&l8, &assignment([(p(1), rat(0, 1)), (p(2), rat(0, 1))])).unwrap(), rat(0, 1));

        let a8 = genus_polynomial(&a_hat_series(DEFAULT_ORDER), 2).unwrap();
        let t = 7i64;
        let r = 1 + 2 * t;
        let vals = assignment([(p(1), rat(2 * r, 1)), (p(2), rat(45 + 4 * r * r, 7))]);
        assert_eq!(evaluate_genus(&a8, &vals).unwrap(), rat(t * (t + 1), 56));
    }

    #[test]
    fn evaluation_reports_unbound_symbols() {
        let l8 = genus_polynomial(&l_genus_series(DEFAULT_ORDER), 2).unwrap();
        let err = evaluate_genus(&l8, &assignment([(p(1), rat(2, 1))])).unwrap_err();
        assert_eq!(err, MsqError::UnboundSymbol(p(2)));
    }

    #[test]
    fn newton_identities() {
        let power_sum = |n: usize, d: u32| {
            SymmetricExpansion::from_terms(
                n,
                (0..n).map(|i| {
                    let mut e = vec![0; n];
                    e[i] = d;
                    (e, rat(1, 1))
                }),
            )
        };
        assert_eq!(
            elementary_symmetric_decompose(&power_sum(2, 2)).unwrap(),
            poly(2, &[(&[2, 0], rat(1, 1)), (&[0, 1], rat(-2, 1))])
        );
        let x1x2 = SymmetricExpansion::from_terms(2, [(vec![1, 1], rat(1, 1))]);
        assert_eq!(elementary_symmetric_decompose(&x1x2).unwrap(), poly(2, &[(&[0, 1], rat(1, 1))]));
        assert_eq!(
            elementary_symmetric_decompose(&power_sum(3, 3)).unwrap(),
            poly(3, &[(&[3, 0, 0], rat(1, 1)), (&[1, 1, 0], rat(-3, 1)), (&[0, 0, 1], rat(3, 1))])
        );
    }

    #[test]
    fn non_symmetric_input_is_rejected() {
        let e = SymmetricExpansion::from_terms(2, [(vec![2, 0], rat(1, 1))]);
        assert!(matches!(elementary_symmetric_decompose(&e), Err(MsqError::SymmetryViolation(_))));
    }

    #[test]
    fn inhomogeneous_weight_is_rejected() {
        let err = GradedPoly::from_terms(2, [(vec![1], rat(1, 1))]).unwrap_err();
        assert!(matches!(err, MsqError::NotHomogeneous { declared: 2, found: 1, .. }));
    }

    #[test]
    fn rendering() {
        let l8 = genus_polynomial(&l_genus_series(DEFAULT_ORDER), 2).unwrap();
        assert_eq!(l8.to_string(), "(7/45)*p8 + (-1/45)*p4^2");
        assert_eq!(GradedPoly::zero(3).to_string(), "0");
        let mixed = poly(3, &[(&[1, 1], rat(2, 1)), (&[0, 0, 1], rat(1, 2))]);
        assert_eq!(mixed.to_string(), "(1/2)*p12 + (2)*p4*p8");
    }
}
