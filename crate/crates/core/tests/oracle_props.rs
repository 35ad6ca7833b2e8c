mod common;

use choresolver::generators::{gen, Family, FamilySpec};
use choresolver::oracles::{
    aps_lower_bound, cheapest_repaying_set, exact_aps, exact_mms, mms_lower_bound, partition_value, Witness,
};
use choresolver::rational::{self, frac, int};
use choresolver::{Instance, OracleConfig, Rational};
use proptest::prelude::*;

fn check_mms_witness(inst: &Instance, agent: usize, value: &Rational, witness: &Option<Witness>) {
    let Some(Witness::Partition { bundles }) = witness else {
        panic!("MMS value without a partition witness");
    };
    let mut items: Vec<usize> = bundles.concat();
    items.sort_unstable();
    assert_eq!(items, (0..inst.m()).collect::<Vec<_>>());
    assert_eq!(&partition_value(inst, agent, bundles).unwrap(), value);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn oracles_dominate_lower_bounds(inst in common::instance(3, 10, true)) {
        let cfg = OracleConfig::default();
        for i in 0..inst.n() {
            let mms = exact_mms(&inst, i, &cfg).unwrap();
            prop_assert!(mms.value >= mms_lower_bound(&inst, i));
            check_mms_witness(&inst, i, &mms.value, &mms.witness);
            let aps = exact_aps(&inst, i, &cfg).unwrap();
            prop_assert!(aps.value >= aps_lower_bound(&inst, i));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn aps_certificates_verify(inst in common::instance(3, 8, true)) {
        let cfg = OracleConfig::default();
        for i in 0..inst.n() {
            let aps = exact_aps(&inst, i, &cfg).unwrap();
            let share = inst.weight(i).clone();
            if let Some(Witness::Rewards { rewards }) = &aps.witness {
                prop_assert!(rewards.iter().all(|r| *r >= int(0)));
                prop_assert_eq!(rational::sum(rewards), int(1));
                prop_assert!(cheapest_repaying_set(inst.row(i), &share, rewards) >= aps.value);
            } else {
                prop_assert_eq!(inst.m(), 0);
            }
            // The cover shows the next threshold up cannot be forced.
            if let Some(cover) = &aps.cover {
                prop_assert!(cover.threshold > aps.value);
                prop_assert!(cover.weights.iter().all(|w| *w >= int(0)));
                prop_assert!(&share * rational::sum(&cover.weights) <= int(1));
                for set in &cover.sets {
                    prop_assert!(inst.bundle_cost(i, set) < cover.threshold);
                }
                for j in 0..inst.m() {
                    let covered = rational::sum(
                        cover.sets.iter().zip(&cover.weights).filter(|(s, _)| s.contains(&j)).map(|(_, w)| w),
                    );
                    prop_assert!(covered >= int(1));
                }
            }
        }
    }

    #[test]
    fn aps_never_exceeds_mms_under_equal_shares(inst in common::instance(3, 8, false)) {
        let cfg = OracleConfig::default();
        for i in 0..inst.n() {
            prop_assert!(exact_aps(&inst, i, &cfg).unwrap().value <= exact_mms(&inst, i, &cfg).unwrap().value);
        }
    }

    #[test]
    fn identical_agents_share_one_mms(inst in common::instance(4, 10, false)) {
        let row = inst.row(0).to_vec();
        let same = Instance::with_uniform_costs(vec![row; inst.n()]).unwrap();
        let cfg = OracleConfig::default();
        let first = exact_mms(&same, 0, &cfg).unwrap().value;
        for i in 1..same.n() {
            prop_assert_eq!(&exact_mms(&same, i, &cfg).unwrap().value, &first);
        }
    }

    #[test]
    fn single_agent_mms_is_everything(inst in common::instance(1, 10, false)) {
        let v = exact_mms(&inst, 0, &OracleConfig::default()).unwrap().value;
        prop_assert_eq!(v, inst.total_cost(0));
    }
}

#[test]
fn aps_on_bad_propx_family_is_the_largest_item() {
    let cfg = OracleConfig::default();
    for n in 3..=5 {
        let inst = gen(&FamilySpec::new(Family::MmsBadPropx, n)).unwrap().normalized().unwrap();
        for i in 0..n {
            assert_eq!(exact_aps(&inst, i, &cfg).unwrap().value, frac(1, 2), "n = {n}");
        }
    }
}
