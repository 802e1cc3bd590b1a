//! The `verify` suite: every known value and consequence the library
//! reproduces, run end to end.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use pplane::abgroup::{self, IntMatrix, TorsionConstraint};
use pplane::classify::{
    self, BundleCategory, BundleDescriptor, HalfDim, ModelDescriptor, StructureCount,
};
use pplane::msq::{self, PontrjaginSymbol};
use pplane::series::{self, int, rat, PowerSeries, Rational};
use pplane::{Execution, FgAbGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Outcome {
    pub location: &'static str,
    pub description: &'static str,
    pub result: Result<(), String>,
}

type CheckFn = fn() -> Result<(), String>;

fn expect_eq<T: PartialEq + std::fmt::Debug>(actual: T, expected: T) -> Result<(), String> {
    if actual == expected {
        Ok(())
    } else {
        Err(format!("got {actual:?}, expected {expected:?}"))
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(what()) }
}

fn rats(pairs: &[(i64, i64)]) -> Vec<Rational> {
    pairs.iter().map(|&(n, d)| rat(n, d)).collect()
}

fn model(m: HalfDim, r: i64, s: i64) -> ModelDescriptor {
    ModelDescriptor::new(m, r, s).expect("valid descriptor")
}

fn coefficients(f: &PowerSeries, upto: usize) -> Vec<Rational> {
    f.coefficients()[..=upto].to_vec()
}

fn series_l() -> Result<(), String> {
    let got = coefficients(&series::l_genus_series(4), 4);
    expect_eq(got, rats(&[(1, 1), (1, 3), (-1, 45), (2, 945), (-1, 4725)]))
}

fn series_a_hat() -> Result<(), String> {
    let got = coefficients(&series::a_hat_series(4), 4);
    expect_eq(got, rats(&[(1, 1), (-1, 24), (7, 5760), (-31, 967680), (127, 154828800)]))
}

fn series_l_dual() -> Result<(), String> {
    let d = series::dual_series(&series::l_genus_series(4)).map_err(|e| e.to_string())?;
    expect_eq(coefficients(&d, 4), rats(&[(1, 1), (-1, 3), (7, 45), (-62, 945), (127, 4725)]))
}

fn series_a_hat_dual() -> Result<(), String> {
    let d = series::dual_series(&series::a_hat_series(4)).map_err(|e| e.to_string())?;
    expect_eq(coefficients(&d, 4), rats(&[(1, 1), (1, 24), (-1, 1440), (1, 60480), (-1, 2419200)]))
}

fn s_numbers_read_off() -> Result<(), String> {
    let l = series::s_numbers(&series::l_genus_series(8), 3).map_err(|e| e.to_string())?;
    expect_eq(l, rats(&[(1, 3), (7, 45), (62, 945)]))?;
    let a = series::s_numbers(&series::a_hat_series(8), 4).map_err(|e| e.to_string())?;
    expect_eq(a, rats(&[(-1, 24), (-1, 1440), (-1, 60480), (-1, 2419200)]))
}

fn genus_string(f: &PowerSeries, n: usize, zero: &[usize]) -> Result<String, String> {
    let poly = msq::genus_polynomial(f, n).map_err(|e| e.to_string())?;
    let zeroed: Vec<PontrjaginSymbol> = zero.iter().map(|&w| PontrjaginSymbol::of_weight(w)).collect();
    Ok(poly.with_zeroed(&zeroed).to_string())
}

fn genus_table() -> Result<(), String> {
    let l = series::l_genus_series(8);
    let a = series::a_hat_series(8);
    expect_eq(genus_string(&l, 1, &[])?, "(1/3)*p4".to_string())?;
    expect_eq(genus_string(&a, 1, &[])?, "(-1/24)*p4".to_string())?;
    expect_eq(genus_string(&l, 2, &[])?, "(7/45)*p8 + (-1/45)*p4^2".to_string())?;
    expect_eq(genus_string(&a, 2, &[])?, "(-1/1440)*p8 + (7/5760)*p4^2".to_string())?;
    expect_eq(genus_string(&l, 4, &[1, 3])?, "(127/4725)*p16 + (-19/14175)*p8^2".to_string())?;
    expect_eq(genus_string(&a, 4, &[1, 3])?, "(-1/2419200)*p16 + (13/29030400)*p8^2".to_string())
}

fn two_point_table() -> Result<(), String> {
    let l = series::l_genus_series(8);
    let a = series::a_hat_series(8);
    expect_eq(msq::two_point_genus(&l, 1).map_err(|e| e.to_string())?, (rat(7, 45), rat(-1, 45)))?;
    expect_eq(
        msq::two_point_genus(&a, 2).map_err(|e| e.to_string())?,
        (rat(-1, 2419200), rat(13, 29030400)),
    )
}

/// Coefficients of `p_{8k}` and `p_{4k}^2` in `K_{2k}` with every other class zeroed.
fn two_point_from_full(f: &PowerSeries, k: usize) -> Result<(Rational, Rational), String> {
    let poly = msq::genus_polynomial(f, 2 * k).map_err(|e| e.to_string())?;
    let mut top = vec![0; 2 * k];
    top[2 * k - 1] = 1;
    let mut square = vec![0; 2 * k];
    square[k - 1] = 2;
    Ok((poly.coefficient(&top), poly.coefficient(&square)))
}

fn random_genus_series(rng: &mut ChaCha8Rng, order: usize) -> PowerSeries {
    let mut coeffs = vec![Rational::one()];
    for _ in 0..order {
        coeffs.push(rat(rng.gen_range(-30..=30), rng.gen_range(1..=12)));
    }
    PowerSeries::new(coeffs).expect("nonempty")
}

fn two_point_random() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for i in 0..20 {
        let f = random_genus_series(&mut rng, 4);
        for k in 1..=2 {
            let fast = msq::two_point_genus(&f, k).map_err(|e| e.to_string())?;
            let full = two_point_from_full(&f, k)?;
            ensure(fast == full, || format!("series #{i}, k = {k}: {fast:?} vs {full:?}"))?;
        }
    }
    Ok(())
}

fn tensored_generator_order() -> Result<(), String> {
    for (group, n) in [("Z + Z/12", 2u64), ("Z + Z/120", 4)] {
        let target: FgAbGroup = group.parse().map_err(|e: abgroup::GroupError| e.to_string())?;
        let iota = abgroup::GroupMap::new(FgAbGroup::free(1), target, IntMatrix::from_rows(&[[2], [-1]]))
            .map_err(|e| e.to_string())?;
        let order = abgroup::element_order_after_tensor(&iota, &[2, -1], n).map_err(|e| e.to_string())?;
        expect_eq(order, n)?;
    }
    Ok(())
}

fn torsion_deductions() -> Result<(), String> {
    for (a, n, expected) in [(2u64, 2u64, 2u64), (4, 4, 4)] {
        let constraints = [
            TorsionConstraint::EmbedsIn(a),
            TorsionConstraint::TensorIsomorphic(n, FgAbGroup::cyclic(n)),
            TorsionConstraint::OrderAtMost(64),
        ];
        let got = abgroup::solve_torsion_constraints(&constraints).map_err(|e| e.to_string())?;
        expect_eq(got, vec![FgAbGroup::cyclic(expected)])?;
    }
    Ok(())
}

fn torsion_from_table() -> Result<(), String> {
    for (dim, expected) in [(HalfDim::Four, 2u64), (HalfDim::Eight, 4)] {
        let constraints = classify::stable_torsion_constraints(dim).map_err(|e| e.to_string())?;
        expect_eq(constraints[0].clone(), TorsionConstraint::EmbedsIn(expected))?;
        let got = abgroup::solve_torsion_constraints(&constraints).map_err(|e| e.to_string())?;
        expect_eq(got, vec![FgAbGroup::cyclic(expected)])?;
    }
    Ok(())
}

fn thom_cohomology() -> Result<(), String> {
    let c = classify::thom_cohomology(HalfDim::Four, 1);
    expect_eq(c.relation(), "y4^2 = y8".to_string())?;
    expect_eq((c.euler_characteristic, c.signature), (Some(3), Some(1)))?;
    expect_eq(c.stiefel_whitney.as_deref(), Some("1 + y4 + y4^2"))
}

fn bundle_realizability() -> Result<(), String> {
    let hp2 = BundleDescriptor { dim: HalfDim::Four, euler: 1, p_class: Some(int(2)), exotic: 0 };
    let op2 = BundleDescriptor { dim: HalfDim::Eight, euler: 1, p_class: Some(int(6)), exotic: 0 };
    ensure(classify::bundle_admissible(&hp2), || "HP^2 bundle rejected".into())?;
    ensure(classify::bundle_admissible(&op2), || "OP^2 bundle rejected".into())
}

fn pontrjagin_ranges() -> Result<(), String> {
    let show = |k, c| classify::pontrjagin_range(k, c).map(|l| l.to_string()).map_err(|e| e.to_string());
    expect_eq(show(1, BundleCategory::Vect)?, "2Z".to_string())?;
    expect_eq(show(2, BundleCategory::Vect)?, "6Z".to_string())?;
    expect_eq(show(2, BundleCategory::Top)?, "(6/7)Z".to_string())
}

fn quaternionic_plane() -> Result<(), String> {
    let r = classify::model_invariants(&ModelDescriptor::quaternionic_projective_plane());
    expect_eq((r.p_m.clone(), r.p_2m.clone()), (Some(int(2)), int(7)))?;
    ensure(r.a_hat.is_zero(), || format!("A-hat = {}", r.a_hat))?;
    expect_eq(r.diff, StructureCount { admits: true, count: 2 })?;
    ensure(r.psc, || "psc false".into())?;
    expect_eq(r.name, Some("HP^2"))
}

fn octonionic_plane() -> Result<(), String> {
    let r = classify::model_invariants(&ModelDescriptor::octonionic_projective_plane());
    expect_eq((r.p_m.clone(), r.p_2m.clone()), (Some(int(6)), int(39)))?;
    ensure(r.a_hat.is_zero(), || format!("A-hat = {}", r.a_hat))?;
    ensure(r.psc, || "psc false".into())?;
    expect_eq(r.name, Some("OP^2"))
}

fn quaternionic_orientation_reversal() -> Result<(), String> {
    let same = classify::homeomorphic(&model(HalfDim::Four, 1, 0), &model(HalfDim::Four, -1, 0))
        .map_err(|e| e.to_string())?;
    ensure(same, || "M_{1,0} and M_{-1,0} not homeomorphic".into())
}

fn homotopy_counts() -> Result<(), String> {
    for (dim, expected) in [(HalfDim::Two, 1u64), (HalfDim::Four, 6), (HalfDim::Eight, 60)] {
        let (orbits, invariants) = classify::homotopy_type_counts(dim, Execution::default());
        expect_eq((orbits, invariants), (expected, expected))?;
        expect_eq(classify::count_homotopy_types(dim).map_err(|e| e.to_string())?, expected)?;
    }
    Ok(())
}

fn pl_structures() -> Result<(), String> {
    for r in [-5, 1, 3, 15] {
        expect_eq(classify::pl_structure(&model(HalfDim::Four, r, 1)), StructureCount { admits: false, count: 0 })?;
    }
    expect_eq(classify::pl_structure(&model(HalfDim::Eight, 9, 3)), StructureCount { admits: true, count: 1 })?;
    expect_eq(
        classify::pl_structure(&ModelDescriptor::chern_manifold()),
        StructureCount { admits: false, count: 0 },
    )
}

fn diff_structures() -> Result<(), String> {
    let t7 = model(HalfDim::Four, 15, 0);
    expect_eq(classify::diff_structure(&t7), StructureCount { admits: true, count: 2 })?;
    let a_hat = classify::a_hat_number(&t7);
    ensure(a_hat.is_integer(), || format!("A-hat of M_{{15,0}} = {a_hat} is not integral"))?;
    expect_eq(
        classify::diff_structure(&model(HalfDim::Eight, 7, 0)),
        StructureCount { admits: true, count: 2 },
    )
}

fn smooth_residues() -> Result<(), String> {
    let four = classify::smooth_residues(HalfDim::Four).map_err(|e| e.to_string())?;
    expect_eq((four.modulus, four.residues.clone()), (56, vec![0, 7, 48, 55]))?;
    let eight = classify::smooth_residues(HalfDim::Eight).map_err(|e| e.to_string())?;
    expect_eq((eight.modulus, eight.residues.clone()), (16256, vec![0, 127, 16128, 16255]))
}

fn two_dimensional_list() -> Result<(), String> {
    let e = classify::enumerate_models(HalfDim::Two, &[], Execution::default());
    let names: Vec<_> = e.rows.iter().map(|r| r.name).collect();
    expect_eq(names, vec![Some("CP^2"), Some("Ch^4")])?;
    ensure(!e.rows[1].diff.admits, || "Chern manifold reported smoothable".into())
}

fn splitting() -> Result<(), String> {
    for dim in [HalfDim::Four, HalfDim::Eight] {
        ensure(classify::verify_splitting(dim).map_err(|e| e.to_string())?, || {
            format!("splitting fails for m = {dim}")
        })?;
        let mutated = classify::splitting_holds(dim, [2, 0]).map_err(|e| e.to_string())?;
        ensure(!mutated, || format!("mutated map passes for m = {dim}"))?;
    }
    Ok(())
}

fn grid() -> Vec<ModelDescriptor> {
    let mut out = Vec::new();
    for r in (-99..=99).filter(|r: &i64| r % 2 != 0) {
        for s in 0..2 {
            out.push(model(HalfDim::Four, r, s));
        }
    }
    for r in (-49..=49).filter(|r: &i64| r % 2 != 0) {
        for s in 0..4 {
            out.push(model(HalfDim::Eight, r, s));
        }
    }
    out
}

fn signature_closure() -> Result<(), String> {
    let g = grid();
    expect_eq(g.len(), 400)?;
    for d in &g {
        let sig = classify::signature_number(d);
        ensure(sig.is_one(), || format!("{d}: L = {sig}"))?;
    }
    Ok(())
}

fn bordism_separation() -> Result<(), String> {
    let g = grid();
    let invariants: Vec<_> = g.iter().map(classify::bordism_invariants).collect();
    for (i, a) in g.iter().enumerate() {
        for (j, b) in g.iter().enumerate().skip(i + 1) {
            if a.dim() != b.dim() {
                continue;
            }
            let homeo = classify::homeomorphic(a, b).map_err(|e| e.to_string())?;
            ensure(homeo || invariants[i] != invariants[j], || format!("{a} and {b} share bordism invariants"))?;
        }
    }
    Ok(())
}

fn smith_normal_form() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for i in 0..200 {
        let (rows, cols) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let data: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-9..=9)).collect();
        let a = IntMatrix::from_vec(rows, cols, data);
        let snf = abgroup::smith_normal_form(&a);
        ensure(snf.left.mul(&a).mul(&snf.right) == snf.diagonal, || format!("matrix #{i}: U A V != D"))?;
        ensure(snf.left.determinant().abs() == 1 && snf.right.determinant().abs() == 1, || {
            format!("matrix #{i}: transforms not unimodular")
        })?;
        let d = &snf.divisors;
        ensure(d.iter().all(|&x| x >= 0), || format!("matrix #{i}: negative divisor"))?;
        for w in d.windows(2) {
            ensure(if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 }, || {
                format!("matrix #{i}: divisors {d:?} do not form a chain")
            })?;
        }
        for r in 0..rows {
            for c in 0..cols {
                let expected = if r == c { d[r] } else { 0 };
                ensure(snf.diagonal[(r, c)] == expected, || format!("matrix #{i}: not diagonal"))?;
            }
        }
    }
    Ok(())
}

fn equivalence_axioms() -> Result<(), String> {
    type Pred = fn(&ModelDescriptor, &ModelDescriptor) -> Result<bool, classify::ClassifyError>;
    fn bordant(a: &ModelDescriptor, b: &ModelDescriptor) -> Result<bool, classify::ClassifyError> {
        Ok(a.dim() == b.dim() && classify::bordism_invariants(a) == classify::bordism_invariants(b))
    }
    let preds: [(&str, Pred); 3] = [
        ("homeomorphic", classify::homeomorphic),
        ("homotopy equivalent", classify::homotopy_equivalent),
        ("bordant", bordant),
    ];
    let mut families: BTreeMap<HalfDim, Vec<ModelDescriptor>> = BTreeMap::new();
    for r in [-15, -7, -1, 1, 3, 7, 11, 13, 25, 37] {
        families.entry(HalfDim::Four).or_default().extend((0..2).map(|s| model(HalfDim::Four, r, s)));
    }
    for r in [-7, -1, 1, 7, 61, 113] {
        families.entry(HalfDim::Eight).or_default().extend((0..4).map(|s| model(HalfDim::Eight, r, s)));
    }
    families
        .entry(HalfDim::Two)
        .or_default()
        .extend([ModelDescriptor::complex_projective_plane(), ModelDescriptor::chern_manifold()]);
    for (name, pred) in preds {
        for family in families.values() {
            let rel = |a, b| pred(a, b).map_err(|e| e.to_string());
            for a in family {
                ensure(rel(a, a)?, || format!("{name}: {a} not reflexive"))?;
                for b in family {
                    let ab = rel(a, b)?;
                    ensure(ab == rel(b, a)?, || format!("{name}: not symmetric on {a}, {b}"))?;
                    if !ab {
                        continue;
                    }
                    for c in family {
                        ensure(!rel(b, c)? || rel(a, c)?, || format!("{name}: not transitive on {a}, {b}, {c}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("genus series", "l(t) through t^4", series_l),
    ("genus series", "a-hat(t) through t^4", series_a_hat),
    ("dual series", "l dual through t^4", series_l_dual),
    ("dual series", "a-hat dual through t^4", series_a_hat_dual),
    ("dual series", "s-numbers read off the dual series", s_numbers_read_off),
    ("genus polynomials", "L4, A4, L8, A8 and sparse L16, A16", genus_table),
    ("two-class formula", "K_{2k} coefficients for L (k=1) and A-hat (k=2)", two_point_table),
    ("two-class formula", "agrees with full K_{2k} on 20 random series", two_point_random),
    ("bottom-row splitting", "image of (2,-1) keeps order 2 resp. 4 after tensoring", tensored_generator_order),
    ("stable torsion", "constraint sets solve to Z/2 and Z/4", torsion_deductions),
    ("stable torsion", "constraints from the group table solve to Z/2 and Z/4", torsion_from_table),
    ("Thom space cohomology", "ring, Euler characteristic, signature, Wu class for |e| = 1", thom_cohomology),
    ("bundle realizability", "HP^2 and OP^2 bundle data admissible", bundle_realizability),
    ("Pontrjagin ranges", "2Z, 6Z for vector bundles, (6/7)Z topologically", pontrjagin_ranges),
    ("model invariants", "HP^2 = M_{1,0}: p = (2, 7), A-hat 0, two smoothings, psc", quaternionic_plane),
    ("model invariants", "OP^2 = M_{7,0}: p = (6, 39), A-hat 0, psc", octonionic_plane),
    ("homeomorphism", "M_{1,0} and M_{-1,0} homeomorphic", quaternionic_orientation_reversal),
    ("homotopy types", "1, 6, 60 types; orbit and invariant counts agree", homotopy_counts),
    ("PL structures", "ks != 0 blocks PL for m = 4; M_{9,3} is PL; Ch^4 is not", pl_structures),
    ("DIFF structures", "M_{15,0} and M_{7,0} (m = 8) smoothable with two structures", diff_structures),
    ("smoothability residues", "t(t+1) = 0 mod 56 and u(u+1) = 0 mod 16256", smooth_residues),
    ("m = 2 enumeration", "exactly CP^2 and Ch^4, Ch^4 not smoothable", two_dimensional_list),
    ("bottom-row splitting", "exact before and after tensoring; mutated map rejected", splitting),
    ("property grid", "signature 1 on the 400-model grid", signature_closure),
    ("property grid", "non-homeomorphic models have distinct bordism invariants", bordism_separation),
    ("Smith normal form", "200 random matrices", smith_normal_form),
    ("equivalence relations", "homeomorphism, homotopy, bordism are equivalences", equivalence_axioms),
];

pub fn run_all() -> Vec<Outcome> {
    CHECKS
        .iter()
        .map(|&(location, description, check)| Outcome { location, description, result: check() })
        .collect()
}
