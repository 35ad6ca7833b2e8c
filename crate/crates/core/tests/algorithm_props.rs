mod common;

use choresolver::algorithms::{
    bid_and_take, envy_cycle_eliminate, ordinal_unweighted, ordinal_weighted, reduction_bijection, run_ido,
    solve_general_with, Algorithm, SolveOptions,
};
use choresolver::fairness::{check_envy, check_propx, UpTo};
use choresolver::instance::{is_ido, to_ido};
use choresolver::rational::{frac, int};
use choresolver::Instance;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn envy_cycle_keeps_partial_efx(inst in common::ido_instance(6, 12, false)) {
        let (alloc, trace) = envy_cycle_eliminate(&inst, SolveOptions::checked()).unwrap();
        prop_assert_eq!(trace.replay(), alloc.clone());
        prop_assert!(check_envy(&inst, &alloc, UpTo::Any).unwrap().holds);
    }

    #[test]
    fn bid_and_take_invariants(inst in common::ido_instance(6, 12, true)) {
        let (alloc, trace) = bid_and_take(&inst, SolveOptions::checked()).unwrap();
        prop_assert_eq!(trace.replay(), alloc.clone());
        prop_assert!(check_propx(&inst, &alloc, UpTo::Any).unwrap().holds);
    }

    #[test]
    fn every_algorithm_survives_checked_reduction(inst in common::instance(5, 10, true)) {
        for algo in Algorithm::ALL {
            let out = solve_general_with(&inst, algo, SolveOptions::checked()).unwrap();
            out.allocation.validate(&inst, true).unwrap();
            let pairs = reduction_bijection(&inst, &out.ido, &out.inner, &out.allocation).unwrap();
            for (i, row) in pairs.iter().enumerate() {
                for &(orig, ido) in row {
                    prop_assert!(inst.cost(i, orig) <= out.ido.transformed.cost(i, ido));
                }
            }
        }
    }

    #[test]
    fn reduction_preserves_propx_alpha(inst in common::instance(5, 10, true)) {
        for algo in Algorithm::ALL {
            let out = solve_general_with(&inst, algo, SolveOptions::default()).unwrap();
            let inner = check_propx(&out.ido.transformed, &out.inner, UpTo::Any).unwrap();
            let outer = check_propx(&inst, &out.allocation, UpTo::Any).unwrap();
            prop_assert!(outer.overall_alpha <= inner.overall_alpha);
        }
    }

    #[test]
    fn bid_and_take_ignores_row_scale(inst in common::instance(4, 8, true), k in 1i64..20) {
        let scaled_costs = (0..inst.n())
            .map(|i| inst.row(i).iter().map(|c| c * int(if i == 0 { k } else { 1 })).collect())
            .collect();
        let scaled = Instance::new(scaled_costs, inst.weights().to_vec()).unwrap();
        let a = solve_general_with(&inst, Algorithm::BidAndTake, SolveOptions::default()).unwrap();
        let b = solve_general_with(&scaled, Algorithm::BidAndTake, SolveOptions::default()).unwrap();
        prop_assert_eq!(a.allocation, b.allocation);
    }

    #[test]
    fn ordinal_output_ignores_cardinal_values(
        a in common::ido_instance(6, 12, true),
        seed in any::<u64>(),
    ) {
        // A second completion of the same order: different magnitudes, same ranking.
        let b_costs = (0..a.n())
            .map(|i| (0..a.m()).map(|j| a.cost(i, j) * int(2) + frac(((a.m() - j) as i64) * ((seed % 7) as i64 + 1), 3)).collect())
            .collect();
        let b = Instance::new(b_costs, a.weights().to_vec()).unwrap();
        prop_assert!(is_ido(&b));
        prop_assert_eq!(ordinal_unweighted(&a).unwrap(), ordinal_unweighted(&b).unwrap());
        prop_assert_eq!(ordinal_weighted(&a).unwrap(), ordinal_weighted(&b).unwrap());
    }

    #[test]
    fn weighted_ordinal_partition_bullets(inst in common::ido_instance(7, 12, true)) {
        let (alloc, part) = ordinal_weighted(&inst).unwrap();
        part.check(&inst, &alloc).unwrap();
        let w1: choresolver::Rational = part.n1.iter().map(|&i| inst.weight(i)).sum();
        prop_assert!(w1 <= frac(1, 2));
        prop_assert!(part.i_star >= inst.n() / 2);
        prop_assert!(check_propx(&inst, &alloc, UpTo::Any).unwrap().within(&int(2)));
    }

    #[test]
    fn ordinal_unweighted_is_two_propx(inst in common::ido_instance(7, 12, false)) {
        let alloc = ordinal_unweighted(&inst).unwrap();
        prop_assert!(check_propx(&inst, &alloc, UpTo::Any).unwrap().within(&int(2)));
    }
}

#[test]
fn no_items_gives_empty_bundles() {
    let inst = Instance::with_uniform_costs(vec![vec![]; 3]).unwrap();
    for algo in Algorithm::ALL {
        let (alloc, _) = run_ido(&inst, algo, SolveOptions::checked()).unwrap();
        assert!(alloc.bundles.iter().all(Vec::is_empty));
    }
}

#[test]
fn transform_of_ido_instance_is_identity() {
    let inst = to_ido(&Instance::with_uniform_costs(vec![vec![int(3), int(1), int(2)]; 2]).unwrap()).transformed;
    assert_eq!(to_ido(&inst).transformed, inst);
}
