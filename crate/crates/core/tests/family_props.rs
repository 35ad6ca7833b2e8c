mod common;

use choresolver::algorithms::{solve_general, Algorithm};
use choresolver::fairness::{check_propx, UpTo};
use choresolver::generators::{gen, ordinal_lb_completions, Family, FamilySpec};
use choresolver::instance::{optimal_social_cost, social_cost};
use choresolver::oracles::{certify_alpha, CertifyMode, ShareNotion};
use choresolver::pof::{min_fair_social_cost, normalized_social_cost};
use choresolver::rational::{frac, int};
use choresolver::{Alpha, Allocation, Notion, OracleConfig, Rational};
use proptest::prelude::*;

#[test]
fn bad_propx_allocation_is_mms_fair_but_far_from_propx() {
    for n in 3..=5usize {
        let inst = gen(&FamilySpec::new(Family::MmsBadPropx, n)).unwrap();
        let mut bundles = vec![Vec::new(); n];
        bundles[0] = (1..n).collect();
        bundles[1] = vec![0];
        let alloc = Allocation::new(bundles);
        let mms = certify_alpha(&inst, &alloc, ShareNotion::Mms, CertifyMode::Exact, &OracleConfig::default()).unwrap();
        assert_eq!(mms.overall_alpha, Alpha::Finite(int(1)));
        let propx = check_propx(&inst, &alloc, UpTo::Any).unwrap();
        let nn = n as i64;
        assert_eq!(propx.overall_alpha, Alpha::Finite(frac(nn * (nn - 2), 2 * (nn - 1))));
    }
}

#[test]
fn ordinal_instance_forces_alpha_near_two() {
    for m in 3..=10usize {
        let [spike, flat] = ordinal_lb_completions(m);
        for alloc in common::all_allocations(2, m) {
            let worst = [&spike, &flat]
                .iter()
                .map(|inst| check_propx(inst, &alloc, UpTo::Any).unwrap().overall_alpha)
                .max()
                .unwrap();
            let bound = int(2) - frac(4, m as i64);
            assert!(!worst.le(&(bound - frac(1, 1_000_000))), "m = {m}, alloc {:?}", alloc.bundles);
        }
    }
}

#[test]
fn hard_families_meet_their_price_of_fairness_bounds() {
    for n in 4..=5usize {
        let inst = gen(&FamilySpec::new(Family::PofUnweighted, n)).unwrap();
        let (opt, _) = optimal_social_cost(&inst);
        let (fair, _) = min_fair_social_cost(&inst, Notion::Propx).unwrap();
        assert!(fair >= opt * frac(n as i64, 6), "n = {n}");
    }
    for eps in [frac(1, 10), frac(1, 20), frac(1, 5)] {
        let inst = gen(&FamilySpec::new(Family::PofWeighted, 2).with_eps(eps.clone())).unwrap();
        let (opt, _) = optimal_social_cost(&inst);
        assert_eq!(opt, &eps * int(2));
        let (fair, _) = min_fair_social_cost(&inst, Notion::Wpropx).unwrap();
        assert!(fair >= opt / (eps * int(4)));
    }
    for m in 4..=8usize {
        let inst = gen(&FamilySpec::new(Family::PofWeightedIdo, 2).with_m(m)).unwrap();
        let (opt, _) = optimal_social_cost(&inst);
        let (fair, _) = min_fair_social_cost(&inst, Notion::Wpropx).unwrap();
        assert!(fair >= opt * frac(m as i64, 4), "m = {m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bid_and_take_cost_stays_within_m_times_optimum(inst in common::ido_instance(4, 10, true)) {
        let inst = match inst.normalized() {
            Ok(i) if inst.m() > 0 => i,
            _ => return Ok(()),
        };
        let alloc = solve_general(&inst, Algorithm::BidAndTake).unwrap();
        let sc = social_cost(&inst, &alloc).unwrap();
        prop_assert!(normalized_social_cost(&inst, &alloc) <= int(1));
        let (opt, _) = optimal_social_cost(&inst);
        prop_assert!(sc <= opt * Rational::from_integer((inst.m() as i64).into()));
    }
}
