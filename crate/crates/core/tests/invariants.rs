//! Property suites over randomly generated lattices, capacities and score
//! vectors.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rcint_core::integrals::{
    comonotone, iv_add, iv_leq, iv_scale, rci, rci_riemann, rsi, rsi_sorted, IntervalVector,
};
use rcint_core::lattice::{enumerate_q, q_count, QPair};
use rcint_core::sample;

fn vector_strategy(n: usize) -> impl Strategy<Value = IntervalVector> {
    proptest::collection::vec((-4.0f64..4.0, 0.0f64..3.0), n).prop_map(|parts| {
        IntervalVector::from_bounds(
            &parts.iter().map(|&(lo, w)| (lo, lo + w)).collect::<Vec<_>>(),
        )
        .expect("ordered bounds")
    })
}

proptest! {
    #[test]
    fn pair_codes_round_trip(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let code = rand::Rng::random_range(&mut rng, 0..q_count(n));
        let pair = QPair::from_code(code, n).unwrap();
        prop_assert_eq!(pair.index().code(), code);
    }

    #[test]
    fn union_and_intersection_bound_the_order(n in 1usize..=4, a in 0usize..81, b in 0usize..81) {
        let pairs = enumerate_q(n).unwrap();
        let p = &pairs[a % pairs.len()];
        let q = &pairs[b % pairs.len()];
        let sup = p.union(q);
        let inf = p.intersection(q);
        prop_assert!(p.leq(&sup) && q.leq(&sup));
        prop_assert!(inf.leq(p) && inf.leq(q));
        // Union is the least bound among enumerated candidates.
        for r in &pairs {
            if p.leq(r) && q.leq(r) {
                prop_assert!(sup.leq(r));
            }
        }
    }

    #[test]
    fn interval_mixture_is_componentwise(
        x in vector_strategy(3),
        y in vector_strategy(3),
        a in 0.0f64..3.0,
    ) {
        let mixed = iv_add(&iv_scale(a, &x).unwrap(), &y).unwrap();
        for i in 0..3 {
            prop_assert!((mixed.get(i).lo() - (a * x.get(i).lo() + y.get(i).lo())).abs() < 1e-12);
            prop_assert!((mixed.get(i).hi() - (a * x.get(i).hi() + y.get(i).hi())).abs() < 1e-12);
        }
        prop_assert!(iv_leq(&y, &mixed) || a == 0.0 || x.lower().iter().any(|&v| v < 0.0));
    }

    #[test]
    fn robust_choquet_is_homogeneous_and_shift_covariant(
        seed in any::<u64>(),
        a in 0.01f64..4.0,
        k in -3.0f64..3.0,
        x in vector_strategy(3),
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mu = sample::random_interval_capacity(&mut rng, 3, 1.0);
        let base = rci(&x, &mu).unwrap();
        let scaled = rci(&iv_scale(a, &x).unwrap(), &mu).unwrap();
        prop_assert!((scaled - a * base).abs() < 1e-9);
        let shift = IntervalVector::degenerate(&[k, k, k]).unwrap();
        let shifted = rci(&iv_add(&x, &shift).unwrap(), &mu).unwrap();
        prop_assert!((shifted - (base + k)).abs() < 1e-9);
        prop_assert!((rci_riemann(&x, &mu).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn sorted_and_lattice_max_min_forms_agree(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rand::Rng::random_range(&mut rng, 1..=4);
        let mu = sample::random_interval_capacity(&mut rng, n, 1.0);
        let x = sample::random_interval_vector(&mut rng, n, 0.0, 1.0);
        prop_assert_eq!(rsi(&x, &mu).unwrap(), rsi_sorted(&x, &mu).unwrap());
    }

    #[test]
    fn generated_comonotone_pairs_are_additive(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rand::Rng::random_range(&mut rng, 1..=4);
        let mu = sample::random_interval_capacity(&mut rng, n, 1.0);
        let (x, y) = sample::random_comonotone_pair(&mut rng, n, -2.0, 4.0);
        prop_assert!(comonotone(&x, &y));
        let sum = rci(&iv_add(&x, &y).unwrap(), &mu).unwrap();
        prop_assert!((sum - rci(&x, &mu).unwrap() - rci(&y, &mu).unwrap()).abs() < 1e-9);
    }
}
