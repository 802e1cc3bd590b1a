use num_integer::Integer;
use num_traits::One;
use pplane::abgroup::{self, FgAbGroup, GroupMap, IntMatrix};
use pplane::classify::{self, HalfDim, ModelDescriptor};
use pplane::msq::{self, GradedPoly};
use pplane::series::{rat, PowerSeries, Rational};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=15).prop_map(|(n, d)| rat(n, d))
}

fn series_with(constant: impl Strategy<Value = Rational>, len: usize) -> impl Strategy<Value = PowerSeries> {
    (constant, prop::collection::vec(small_rational(), len))
        .prop_map(|(c, rest)| PowerSeries::new(std::iter::once(c).chain(rest).collect()).unwrap())
}

fn invertible_series() -> impl Strategy<Value = PowerSeries> {
    let nonzero = (1i64..=40, 1i64..=15, prop::bool::ANY).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d));
    (1usize..=7).prop_flat_map(move |len| series_with(nonzero.clone(), len))
}

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |data| IntMatrix::from_vec(r, c, data))
    })
}

fn finite_group() -> impl Strategy<Value = FgAbGroup> {
    prop::collection::vec(2u64..=12, 1..=2).prop_map(|orders| FgAbGroup::from_cyclic_orders(0, &orders))
}

fn group() -> impl Strategy<Value = FgAbGroup> {
    (0usize..=2, prop::collection::vec(2u64..=12, 0..=2)).prop_map(|(rank, orders)| FgAbGroup::from_cyclic_orders(rank, &orders))
}

/// A well-defined map with the given coefficient seeds.
fn map_from_seeds(source: &FgAbGroup, target: &FgAbGroup, seeds: &[i64]) -> GroupMap {
    let (sa, sb) = (source.generator_orders(), target.generator_orders());
    let mut m = IntMatrix::zeros(sb.len(), sa.len());
    for i in 0..sb.len() {
        for j in 0..sa.len() {
            // an order-0 (free) source generator can go anywhere; a torsion
            // generator of order a must land in the a-torsion of the target
            let step = match (sa[j], sb[i]) {
                (_, 0) if sa[j] != 0 => 0,
                (0, _) | (_, 0) => 1,
                (a, b) => (b / b.gcd(&a)) as i64,
            };
            m[(i, j)] = step * seeds[(i * sa.len() + j) % seeds.len()];
        }
    }
    GroupMap::new(source.clone(), target.clone(), m).expect("well defined by construction")
}

fn elementary_ops(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3), 0..8).prop_map(move |ops| {
        let mut m = IntMatrix::identity(n);
        for (i, j, c) in ops {
            if i != j {
                let mut e = IntMatrix::identity(n);
                e[(i, j)] = c;
                m = e.mul(&m);
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_round_trip(f in invertible_series()) {
        let inv = f.inverse().unwrap();
        prop_assert_eq!(&f * &inv, PowerSeries::one(f.order()));
        prop_assert_eq!(inv.inverse().unwrap(), f);
    }

    #[test]
    fn derivative_undoes_integral(f in invertible_series()) {
        let g = f.integral().derivative();
        prop_assert_eq!(g.truncate(f.order()).unwrap(), f);
    }

    #[test]
    fn product_is_commutative_and_associative(
        f in series_with(small_rational(), 5),
        g in series_with(small_rational(), 5),
        h in series_with(small_rational(), 5),
    ) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
    }

    #[test]
    fn dual_series_keeps_truncation(f in series_with(Just(Rational::one()), 6)) {
        let d = pplane::series::dual_series(&f).unwrap();
        prop_assert_eq!(d.order(), f.order());
        prop_assert!(d.constant_term().is_one());
    }

    #[test]
    fn decompose_inverts_expand(
        weight in 1usize..=4,
        seeds in prop::collection::vec(small_rational(), 5),
    ) {
        // one term per partition of the weight
        let partitions: Vec<Vec<u32>> = match weight {
            1 => vec![vec![1]],
            2 => vec![vec![0, 1], vec![2, 0]],
            3 => vec![vec![0, 0, 1], vec![1, 1, 0], vec![3, 0, 0]],
            _ => vec![vec![0, 0, 0, 1], vec![1, 0, 1, 0], vec![0, 2, 0, 0], vec![2, 1, 0, 0], vec![4, 0, 0, 0]],
        };
        let poly = GradedPoly::from_terms(weight, partitions.into_iter().zip(seeds)).unwrap();
        let expanded = msq::expand_elementary(&poly, weight);
        prop_assert!(expanded.check_symmetric().is_ok());
        prop_assert_eq!(msq::elementary_symmetric_decompose(&expanded).unwrap(), poly);
    }

    #[test]
    fn smith_form_invariants(a in matrix(5, 9)) {
        let snf = abgroup::smith_normal_form(&a);
        prop_assert_eq!(snf.left.mul(&a).mul(&snf.right), snf.diagonal.clone());
        prop_assert_eq!(snf.left.determinant().abs(), 1);
        prop_assert_eq!(snf.right.determinant().abs(), 1);
        for w in snf.divisors.windows(2) {
            prop_assert!(w[0] >= 0 && w[1] >= 0);
            let chained = if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
            prop_assert!(chained);
        }
    }

    #[test]
    fn smith_divisors_invariant_under_unimodular_change(
        (a, p, q) in matrix(4, 9).prop_flat_map(|a| {
            let (r, c) = (a.rows(), a.cols());
            (Just(a), elementary_ops(r), elementary_ops(c))
        })
    ) {
        let changed = p.mul(&a).mul(&q);
        prop_assert_eq!(abgroup::smith_normal_form(&changed).divisors, abgroup::smith_normal_form(&a).divisors);
    }

    #[test]
    fn cokernel_of_relations_is_presented_group(a in matrix(4, 9)) {
        // coker(A: Z^c -> Z^r) has one cyclic factor per nonzero divisor, plus free rank
        let snf = abgroup::smith_normal_form(&a);
        let f = GroupMap::new(FgAbGroup::free(a.cols()), FgAbGroup::free(a.rows()), a.clone()).unwrap();
        let orders: Vec<u64> = snf.divisors.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
        let free = a.rows() - snf.rank();
        prop_assert_eq!(f.cokernel(), FgAbGroup::from_cyclic_orders(free, &orders));
        prop_assert_eq!(f.kernel(), FgAbGroup::free(a.cols() - snf.rank()));
    }

    #[test]
    fn group_render_parse_round_trip(g in group()) {
        let text = g.to_string();
        prop_assert_eq!(text.parse::<FgAbGroup>().unwrap(), g);
    }

    #[test]
    fn tensor_is_functorial(
        (a, b, c) in (group(), group(), group()),
        seeds_f in prop::collection::vec(-6i64..=6, 1..=9),
        seeds_g in prop::collection::vec(-6i64..=6, 1..=9),
        n in 2u64..=6,
    ) {
        let f = map_from_seeds(&a, &b, &seeds_f);
        let g = map_from_seeds(&b, &c, &seeds_g);
        let composite = f.then(&g).unwrap().tensor_cyclic(n).unwrap();
        let tensored = f.tensor_cyclic(n).unwrap().then(&g.tensor_cyclic(n).unwrap()).unwrap();
        prop_assert_eq!(composite, tensored);
    }

    #[test]
    fn first_isomorphism_orders(
        (a, b) in (finite_group(), finite_group()),
        seeds in prop::collection::vec(-12i64..=12, 1..=4),
    ) {
        // 0 -> ker f -> A -> im f -> 0 is exact, so |A| = |ker f| |im f|
        let f = map_from_seeds(&a, &b, &seeds);
        let (k, i) = (f.kernel().order().unwrap(), f.image().order().unwrap());
        prop_assert_eq!(a.order().unwrap(), k * i);
        prop_assert_eq!(b.order().unwrap(), i * f.cokernel().order().unwrap());
    }

    #[test]
    fn short_exact_cyclic_extensions(x in 2u64..=20, y in 2u64..=20) {
        // 0 -> Z/x --(*y)--> Z/xy -> Z/y -> 0
        let (a, b, c) = (FgAbGroup::cyclic(x), FgAbGroup::cyclic(x * y), FgAbGroup::cyclic(y));
        let seq = [
            GroupMap::from_trivial(a.clone()),
            GroupMap::new(a.clone(), b.clone(), IntMatrix::from_rows(&[[y as i64]])).unwrap(),
            GroupMap::new(b.clone(), c.clone(), IntMatrix::from_rows(&[[1]])).unwrap(),
            GroupMap::to_trivial(c.clone()),
        ];
        prop_assert!(abgroup::is_exact(&seq).unwrap());
        prop_assert_eq!(b.order().unwrap(), a.order().unwrap() * c.order().unwrap());
    }

    #[test]
    fn homeomorphic_models_share_coarser_invariants(
        m4 in prop::bool::ANY,
        r in -400i64..=400,
        r2 in -400i64..=400,
        s in 0i64..4,
        s2 in 0i64..4,
    ) {
        let dim = if m4 { HalfDim::Four } else { HalfDim::Eight };
        let modulus = dim.exotic_modulus() as i64;
        let a = ModelDescriptor::new(dim, 2 * r + 1, s % modulus).unwrap();
        let b = ModelDescriptor::new(dim, 2 * r2 + 1, s2 % modulus).unwrap();
        let flipped = ModelDescriptor::new(dim, -(2 * r + 1), if m4 { s % 2 } else { (4 - s % 4) % 4 }).unwrap();
        prop_assert!(classify::homeomorphic(&a, &flipped).unwrap());
        if classify::homeomorphic(&a, &b).unwrap() {
            prop_assert!(classify::homotopy_equivalent(&a, &b).unwrap());
            prop_assert_eq!(classify::bordism_invariants(&a), classify::bordism_invariants(&b));
            prop_assert_eq!(classify::model_invariants(&a).diff, classify::model_invariants(&b).diff);
        }
        prop_assert!(classify::signature_number(&a).is_one());
    }
}
