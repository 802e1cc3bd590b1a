//! Exact rationals and truncated formal power series.
//!
//! A [`PowerSeries`] stores the coefficients `c_0 .. c_n` of
//! `c_0 + c_1 t + ... + c_n t^n`; `n` is its truncation order. Binary
//! operations truncate to the smaller order of their operands, and nothing
//! is ever extrapolated past the stored order.
//!
//! The two genus series are built from the exponential series in an
//! auxiliary variable `x` and then reindexed by `t = x^2`, so no square
//! roots of series are ever needed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact fraction over arbitrary-precision integers.
///
/// Always reduced, with the sign carried by the numerator.
pub type Rational = num_rational::BigRational;

/// Default truncation order; enough for weight-4 (dimension 16) classes.
pub const DEFAULT_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("power series must have at least one coefficient")]
    Empty,
    #[error("non-invertible series: constant term is zero")]
    NonInvertible,
    #[error("not a genus series: constant term is {0}, expected 1")]
    NotGenusSeries(String),
    #[error("truncation error: need order {needed}, series is known to order {available}")]
    Truncation { needed: usize, available: usize },
    #[error("series in x has nonzero odd coefficient at x^{0}")]
    OddCoefficient(usize),
}

/// `num / den` as a reduced rational.
///
/// Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `a` or `a/b`, reduced.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Truncated formal power series over [`Rational`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(PowerSeries { coeffs })
    }

    /// Integer coefficients `c_0 .. c_n`. Panics on an empty slice.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty(), "power series needs a constant term");
        PowerSeries { coeffs: coeffs.iter().map(|&c| int(c)).collect() }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = c;
        PowerSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(Rational::zero(), order)
    }

    /// Truncation degree (inclusive).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&Rational> {
        self.coeffs.get(k)
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drops every coefficient above `order`. Never extends.
    pub fn truncate(&self, order: usize) -> Result<Self, SeriesError> {
        if order > self.order() {
            return Err(SeriesError::Truncation { needed: order, available: self.order() });
        }
        Ok(PowerSeries { coeffs: self.coeffs[..=order].to_vec() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `t`; exact one order higher.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        PowerSeries { coeffs }
    }

    /// Division by `t`, requiring a vanishing constant term.
    pub fn shift_down(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonInvertible);
        }
        if self.order() == 0 {
            return Err(SeriesError::Truncation { needed: 1, available: 0 });
        }
        Ok(PowerSeries { coeffs: self.coeffs[1..].to_vec() })
    }

    /// Multiplicative inverse, known to the same order.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::NonInvertible);
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `self / other`, truncated to the smaller order.
    pub fn checked_div(&self, other: &PowerSeries) -> Result<Self, SeriesError> {
        let n = self.order().min(other.order());
        let inv = other.truncate(n)?.inverse()?;
        Ok(&self.truncate(n)? * &inv)
    }

    /// Termwise derivative; the order drops by one (a constant stays a
    /// zero series of order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return PowerSeries::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * int(k as i64))
            .collect();
        PowerSeries { coeffs }
    }

    /// Antiderivative with zero constant term; the order rises by one.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / int(k as i64 + 1));
        }
        PowerSeries { coeffs }
    }

    /// Reads a series in `x` with vanishing odd part as a series in `t = x^2`.
    pub fn even_part_in_square(&self) -> Result<Self, SeriesError> {
        if let Some(k) = self.coeffs.iter().enumerate().find(|(k, c)| k % 2 == 1 && !c.is_zero()).map(|(k, _)| k) {
            return Err(SeriesError::OddCoefficient(k));
        }
        let coeffs = self.coeffs.iter().step_by(2).cloned().collect();
        Ok(PowerSeries { coeffs })
    }

    /// `exp(a x)` to the given order.
    pub fn exponential(a: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = Rational::one();
        coeffs.push(term.clone());
        for k in 1..=order {
            term = term * a / int(k as i64);
            coeffs.push(term.clone());
        }
        PowerSeries { coeffs }
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect();
        PowerSeries { coeffs }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect();
        PowerSeries { coeffs }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Cauchy product truncated to the smaller order.
impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(Rational::zero(), |acc, j| acc + &self.coeffs[j] * &rhs.coeffs[k - j])
            })
            .collect();
        PowerSeries { coeffs }
    }
}

impl fmt::Display for PowerSeries {
    /// `c0 + c1*t + c2*t^2 + ...`, zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*t")?,
                _ => write!(f, "{mag}*t^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `sqrt(t) / tanh(sqrt(t))` to order `order` in `t`.
///
/// Built as `x/tanh(x) = (e^{2x} + 1) / ((e^{2x} - 1)/x)` in `x`, then
/// reindexed by `t = x^2`.
pub fn l_genus_series(order: usize) -> PowerSeries {
    let x_order = 2 * order + 1;
    let e2 = PowerSeries::exponential(&int(2), x_order);
    let one = PowerSeries::one(x_order);
    let numerator = &e2 + &one;
    let denominator = (&e2 - &one).shift_down().expect("e^{2x} - 1 vanishes at 0");
    let x_over_tanh = numerator.checked_div(&denominator).expect("(e^{2x}-1)/x starts with 2");
    x_over_tanh
        .even_part_in_square()
        .expect("x/tanh(x) is even")
}

/// `(sqrt(t)/2) / sinh(sqrt(t)/2)` to order `order` in `t`.
///
/// Built as the inverse of `sinh(x/2)/(x/2) = (e^{x/2} - e^{-x/2})/x`,
/// then reindexed by `t = x^2`.
pub fn a_hat_series(order: usize) -> PowerSeries {
    let x_order = 2 * order + 1;
    let plus = PowerSeries::exponential(&rat(1, 2), x_order);
    let minus = PowerSeries::exponential(&rat(-1, 2), x_order);
    let sinh_ratio = (&plus - &minus).shift_down().expect("sinh vanishes at 0");
    let a_hat_x = sinh_ratio.inverse().expect("sinh(x/2)/(x/2) starts with 1");
    a_hat_x.even_part_in_square().expect("(x/2)/sinh(x/2) is even")
}

/// The derived series `f * d/dt (t / f)`.
///
/// `t/f` is exact to one order above `f`, so the result keeps the order of
/// `f`. The constant term is always 1.
pub fn dual_series(f: &PowerSeries) -> Result<PowerSeries, SeriesError> {
    if !f.constant_term().is_one() {
        return Err(SeriesError::NotGenusSeries(format_rational(f.constant_term())));
    }
    let t_over_f = f.inverse()?.shift_up();
    Ok(f * &t_over_f.derivative())
}

/// `s_1 .. s_kmax`, where the derived series is `sum (-1)^k s_k t^k`.
pub fn s_numbers(f: &PowerSeries, kmax: usize) -> Result<Vec<Rational>, SeriesError> {
    if kmax > f.order() {
        return Err(SeriesError::Truncation { needed: kmax, available: f.order() });
    }
    let dual = dual_series(f)?;
    Ok((1..=kmax)
        .map(|k| {
            let c = dual.coeffs[k].clone();
            if k % 2 == 1 { -c } else { c }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(cs: &[(i64, i64)]) -> PowerSeries {
        PowerSeries::new(cs.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn rationals_are_reduced_with_positive_denominator() {
        let q = rat(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(format_rational(&rat(-10, 5)), "-2");
    }

    #[test]
    fn add_cancels_and_keeps_disjoint_support() {
        let a = PowerSeries::from_integers(&[1, 1]);
        let b = PowerSeries::from_integers(&[1, -1]);
        assert_eq!(&a + &b, PowerSeries::from_integers(&[2, 0]));

        let l = l_genus_series(4);
        assert!((&l + &(-&l)).is_zero());

        let c = series(&[(1, 1), (1, 3), (0, 1)]);
        let d = series(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(&c + &d, series(&[(1, 1), (1, 3), (1, 1)]));
    }

    #[test]
    fn add_truncates_to_smaller_order() {
        let a = PowerSeries::from_integers(&[1, 2, 3]);
        let b = PowerSeries::from_integers(&[1]);
        assert_eq!((&a + &b).order(), 0);
    }

    #[test]
    fn products() {
        let a = PowerSeries::from_integers(&[1, 1, 0]);
        let b = PowerSeries::from_integers(&[1, -1, 0]);
        assert_eq!(&a * &b, PowerSeries::from_integers(&[1, 0, -1]));

        let geometric = PowerSeries::from_integers(&[1; 6]);
        let one_minus_t = PowerSeries::from_integers(&[1, -1, 0, 0, 0, 0]);
        assert_eq!(&geometric * &one_minus_t, PowerSeries::one(5));

        let l = l_genus_series(4);
        assert_eq!(&l * &l.inverse().unwrap(), PowerSeries::one(4));
    }

    #[test]
    fn division() {
        let one = PowerSeries::one(5);
        let one_minus_t = PowerSeries::from_integers(&[1, -1, 0, 0, 0, 0]);
        assert_eq!(one.checked_div(&one_minus_t).unwrap(), PowerSeries::from_integers(&[1; 6]));

        let l = l_genus_series(6);
        assert_eq!(l.checked_div(&l).unwrap(), PowerSeries::one(6));

        // multiply-back oracle
        let q = PowerSeries::one(6).checked_div(&l).unwrap();
        assert_eq!(&q * &l, PowerSeries::one(6));
    }

    #[test]
    fn division_by_series_without_constant_term_fails() {
        let t = PowerSeries::from_integers(&[0, 1]);
        assert_eq!(PowerSeries::one(1).checked_div(&t), Err(SeriesError::NonInvertible));
    }

    #[test]
    fn derivatives() {
        let a = PowerSeries::from_integers(&[1, 0, 1]);
        assert_eq!(a.derivative(), PowerSeries::from_integers(&[0, 2]));
        assert!(PowerSeries::from_integers(&[7, 0, 0]).derivative().is_zero());
        assert_eq!(PowerSeries::from_integers(&[7]).derivative(), PowerSeries::zero(0));
    }

    #[test]
    fn derived_series_identity_for_l() {
        // f * (t/f)' computed by hand against dual_series
        let l = l_genus_series(3);
        let t_over_l = l.inverse().unwrap().shift_up();
        let direct = &l * &t_over_l.derivative();
        assert_eq!(direct, dual_series(&l).unwrap());
        // (t/l)' = l_dual / l
        assert_eq!(t_over_l.derivative(), dual_series(&l).unwrap().checked_div(&l).unwrap());
    }

    #[test]
    fn l_series_low_orders() {
        let expected = series(&[(1, 1), (1, 3), (-1, 45), (2, 945), (-1, 4725)]);
        assert_eq!(l_genus_series(4), expected);
        assert_eq!(l_genus_series(0), PowerSeries::one(0));
    }

    #[test]
    fn a_hat_series_low_orders() {
        let expected = series(&[(1, 1), (-1, 24), (7, 5760), (-31, 967680), (127, 154828800)]);
        assert_eq!(a_hat_series(4), expected);
        assert_eq!(a_hat_series(0), PowerSeries::one(0));
    }

    #[test]
    fn dual_series_displays() {
        let l_dual = dual_series(&l_genus_series(4)).unwrap();
        assert_eq!(l_dual, series(&[(1, 1), (-1, 3), (7, 45), (-62, 945), (127, 4725)]));
        let a_dual = dual_series(&a_hat_series(4)).unwrap();
        assert_eq!(a_dual, series(&[(1, 1), (1, 24), (-1, 1440), (1, 60480), (-1, 2419200)]));
        assert_eq!(dual_series(&PowerSeries::one(3)).unwrap(), PowerSeries::one(3));
    }

    #[test]
    fn dual_rejects_non_unit_constant_term() {
        let f = PowerSeries::from_integers(&[2, 1]);
        assert!(matches!(dual_series(&f), Err(SeriesError::NotGenusSeries(_))));
    }

    #[test]
    fn s_numbers_read_off() {
        let l = l_genus_series(DEFAULT_ORDER);
        assert_eq!(s_numbers(&l, 3).unwrap(), vec![rat(1, 3), rat(7, 45), rat(62, 945)]);
        let a = a_hat_series(DEFAULT_ORDER);
        assert_eq!(
            s_numbers(&a, 4).unwrap(),
            vec![rat(-1, 24), rat(-1, 1440), rat(-1, 60480), rat(-1, 2419200)]
        );
        assert!(s_numbers(&PowerSeries::one(5), 5).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn s_numbers_past_order_is_a_truncation_error() {
        let l = l_genus_series(2);
        assert_eq!(s_numbers(&l, 3), Err(SeriesError::Truncation { needed: 3, available: 2 }));
    }

    #[test]
    fn odd_part_is_detected() {
        let f = PowerSeries::from_integers(&[1, 0, 2, 5]);
        assert_eq!(f.even_part_in_square(), Err(SeriesError::OddCoefficient(3)));
    }

    #[test]
    fn display() {
        assert_eq!(l_genus_series(0).to_string(), "1");
        assert_eq!(l_genus_series(2).to_string(), "1 + 1/3*t - 1/45*t^2");
        assert_eq!(PowerSeries::zero(2).to_string(), "0");
        assert_eq!(PowerSeries::from_integers(&[0, -2]).to_string(), "-2*t");
    }
}
