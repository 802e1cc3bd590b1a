//! Library results against independent computations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use pplane::abgroup::{self, FgAbGroup, GroupMap, IntMatrix};
use pplane::classify::{self, HalfDim, ModelDescriptor};
use pplane::msq::{self, PontrjaginSymbol};
use pplane::series::{self, int, rat, PowerSeries, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `B_0 .. B_n` from `sum_{k<=m} C(m+1, k) B_k = 0`.
fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=n as u64 {
        let s: Rational = (0..m).map(|k| Rational::from(binomial(m + 1, k)) * &b[k as usize]).sum();
        b.push(-s / Rational::from(BigInt::from(m + 1)));
    }
    b
}

fn factorial(n: u64) -> Rational {
    Rational::from((1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

#[test]
fn genus_series_match_bernoulli_numbers() {
    let b = bernoulli(16);
    let l = series::l_genus_series(8);
    let a = series::a_hat_series(8);
    for k in 0..=8u64 {
        let b2k = &b[2 * k as usize];
        let four_k = Rational::from(BigInt::from(4).pow(k as u32));
        // x/tanh x = sum 4^k B_2k x^2k / (2k)!
        let l_k = &four_k * b2k / factorial(2 * k);
        // (x/2)/sinh(x/2) = sum (2 - 4^k) B_2k x^2k / ((2k)! 4^k)
        let a_k = (int(2) - &four_k) * b2k / (factorial(2 * k) * &four_k);
        assert_eq!(l.coeff(k as usize), Some(&l_k), "l coefficient {k}");
        assert_eq!(a.coeff(k as usize), Some(&a_k), "a-hat coefficient {k}");
    }
}

/// `f(c t)` as a series in `t`.
fn rescale(f: &PowerSeries, c: i64) -> PowerSeries {
    let mut power = Rational::one();
    let coeffs = f
        .coefficients()
        .iter()
        .map(|a| {
            let out = a * &power;
            power *= int(c);
            out
        })
        .collect();
    PowerSeries::new(coeffs).unwrap()
}

fn elementary_values(xs: &[i64]) -> Vec<Rational> {
    // coefficients of prod (1 + x_i z)
    let mut e = vec![Rational::one()];
    for &x in xs {
        let mut next = vec![Rational::zero(); e.len() + 1];
        for (j, c) in e.iter().enumerate() {
            next[j] += c;
            next[j + 1] += c * int(x);
        }
        e = next;
    }
    e
}

#[test]
fn genus_polynomials_agree_with_specialized_products() {
    // K_n(sigma_1(x), .., sigma_n(x)) is the t^n coefficient of prod f(x_i t)
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for f in [series::l_genus_series(8), series::a_hat_series(8)] {
        for n in 1..=4usize {
            let k = msq::genus_polynomial(&f, n).unwrap();
            for _ in 0..10 {
                let xs: Vec<i64> = (0..n).map(|_| rng.gen_range(-7..=7)).collect();
                let product = xs.iter().fold(PowerSeries::one(n), |acc, &x| &acc * &rescale(&f, x));
                let e = elementary_values(&xs);
                let values: BTreeMap<PontrjaginSymbol, Rational> =
                    (1..=n).map(|j| (PontrjaginSymbol::of_weight(j), e[j].clone())).collect();
                assert_eq!(k.evaluate(&values).unwrap(), product.coeff(n).unwrap().clone(), "n = {n}, x = {xs:?}");
            }
        }
    }
}

#[test]
fn a_hat_on_smoothable_family_matches_literal_formula() {
    for t in -200i64..=200 {
        let r = 1 + 2 * t;
        let d = ModelDescriptor::new(HalfDim::Four, r, 0).unwrap();
        let p4 = int(2 * r);
        let p8 = (int(45) + &p4 * &p4) / int(7);
        let literal = (int(-4) * p8 + int(7) * &p4 * &p4) / int(5760);
        assert_eq!(classify::a_hat_number(&d), literal, "t = {t}");
        assert_eq!(classify::a_hat_closed_form(HalfDim::Four, t).unwrap(), literal);
        assert_eq!(classify::diff_structure(&d).admits, literal.is_integer(), "t = {t}");
    }
    for u in -40i64..=40 {
        let r = 7 * (1 + 2 * u);
        let d = ModelDescriptor::new(HalfDim::Eight, r, 0).unwrap();
        let p8 = rat(6 * r, 7);
        let p16 = (int(14175) + int(19) * &p8 * &p8) / int(381);
        let literal = (int(-12) * p16 + int(13) * &p8 * &p8) / int(29030400);
        assert_eq!(classify::a_hat_number(&d), literal, "u = {u}");
        assert_eq!(classify::a_hat_closed_form(HalfDim::Eight, u).unwrap(), literal);
        assert_eq!(classify::diff_structure(&d).admits, literal.is_integer(), "u = {u}");
    }
}

fn partitions(n: u32) -> u64 {
    let mut ways = vec![0u64; n as usize + 1];
    ways[0] = 1;
    for part in 1..=n as usize {
        for total in part..=n as usize {
            ways[total] += ways[total - part];
        }
    }
    ways[n as usize]
}

#[test]
fn abelian_group_counts_are_products_of_partition_numbers() {
    for n in 1u64..=200 {
        let mut rest = n;
        let mut expected = 1;
        let mut p = 2;
        while rest > 1 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            expected *= partitions(e);
            p += 1;
        }
        let groups = abgroup::finite_abelian_groups(n);
        assert_eq!(groups.len() as u64, expected, "order {n}");
        assert!(groups.iter().all(|g| g.order() == Some(n)));
    }
}

fn elements(g: &FgAbGroup) -> Vec<Vec<i64>> {
    let mut all = vec![vec![]];
    for &d in g.torsion() {
        all = all
            .into_iter()
            .flat_map(|prefix| {
                (0..d as i64).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    all
}

fn random_finite_group(rng: &mut ChaCha8Rng) -> FgAbGroup {
    let orders: Vec<u64> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(2..=12)).collect();
    FgAbGroup::from_cyclic_orders(0, &orders)
}

/// A random well-defined map: column `j` must be killed by the order of generator `j`.
fn random_map(rng: &mut ChaCha8Rng, a: &FgAbGroup, b: &FgAbGroup) -> GroupMap {
    let (sa, sb) = (a.generator_orders(), b.generator_orders());
    let mut m = IntMatrix::zeros(sb.len(), sa.len());
    for i in 0..sb.len() {
        for j in 0..sa.len() {
            let step = (sb[i] / sb[i].gcd(&sa[j])) as i64;
            m[(i, j)] = step * rng.gen_range(0..sb[i] as i64);
        }
    }
    GroupMap::new(a.clone(), b.clone(), m).expect("constructed to be well defined")
}

#[test]
fn kernels_and_images_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let a = random_finite_group(&mut rng);
        let b = random_finite_group(&mut rng);
        let f = random_map(&mut rng, &a, &b);
        let source = elements(&a);
        let images: std::collections::BTreeSet<Vec<i64>> = source.iter().map(|x| f.apply(x).unwrap()).collect();
        let zero = vec![0; b.num_generators()];
        let kernel_size = source.iter().filter(|x| f.apply(x).unwrap() == zero).count() as u64;
        assert_eq!(f.kernel().order(), Some(kernel_size), "{a} -> {b}");
        assert_eq!(f.image().order(), Some(images.len() as u64));
        assert_eq!(f.cokernel().order(), Some(b.order().unwrap() / images.len() as u64));
        assert_eq!(f.is_injective(), kernel_size == 1);
        assert_eq!(f.is_surjective(), images.len() as u64 == b.order().unwrap());
    }
}

#[test]
fn exactness_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..150 {
        let a = random_finite_group(&mut rng);
        let b = random_finite_group(&mut rng);
        let c = random_finite_group(&mut rng);
        let f = random_map(&mut rng, &a, &b);
        let g = random_map(&mut rng, &b, &c);
        let zero = vec![0; c.num_generators()];
        let image: std::collections::BTreeSet<Vec<i64>> =
            elements(&a).iter().map(|x| f.apply(x).unwrap()).collect();
        let kernel: std::collections::BTreeSet<Vec<i64>> =
            elements(&b).into_iter().filter(|y| g.apply(y).unwrap() == zero).collect();
        let exact = abgroup::is_exact(&[f.clone(), g.clone()]).unwrap();
        assert_eq!(exact, image == kernel, "{a} -> {b} -> {c}");
    }
}

#[test]
fn tensor_with_cyclic_matches_enumeration_of_quotient() {
    // A (x) Z/n = A / nA: its order is |A| / |nA|
    for orders in [vec![2u64, 4], vec![3, 9], vec![12], vec![2, 6, 12], vec![5, 7]] {
        let a = FgAbGroup::from_cyclic_orders(0, &orders);
        for n in 2u64..=12 {
            let multiples: std::collections::BTreeSet<Vec<i64>> = elements(&a)
                .iter()
                .map(|x| a.reduce(&x.iter().map(|v| v * n as i64).collect::<Vec<_>>()).unwrap())
                .collect();
            let expected = a.order().unwrap() / multiples.len() as u64;
            assert_eq!(a.tensor_cyclic(n).unwrap().order(), Some(expected), "{a} (x) Z/{n}");
        }
    }
}
