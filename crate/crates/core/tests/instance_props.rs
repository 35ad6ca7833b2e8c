mod common;

use choresolver::instance::{is_ido, optimal_social_cost, social_cost, to_ido};
use choresolver::rational::{self, int};
use choresolver::{load_instance, Instance};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalize_on_load_gives_unit_rows(inst in common::positive_instance(4, 8, true)) {
        let doc = inst.to_doc(true);
        let loaded = load_instance(serde_json::to_string(&doc).unwrap().as_bytes()).unwrap();
        for i in 0..loaded.n() {
            prop_assert_eq!(rational::sum(loaded.row(i)), int(1));
        }
        prop_assert_eq!(loaded.weights(), inst.weights());
    }

    #[test]
    fn serialized_instance_round_trips(inst in common::instance(4, 8, true)) {
        let json = serde_json::to_string(&inst.to_doc(false)).unwrap();
        prop_assert_eq!(load_instance(json.as_bytes()).unwrap(), inst);
    }

    #[test]
    fn ido_transform_permutes_rows(inst in common::instance(4, 8, false)) {
        let w = to_ido(&inst);
        prop_assert!(is_ido(&w.transformed));
        for i in 0..inst.n() {
            let mut perm = w.permutations[i].clone();
            for (j, &orig) in perm.iter().enumerate() {
                prop_assert_eq!(w.transformed.cost(i, j), inst.cost(i, orig));
            }
            perm.sort_unstable();
            prop_assert_eq!(perm, (0..inst.m()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn optimum_is_a_lower_bound(inst in common::instance(3, 6, false)) {
        let (opt, witness) = optimal_social_cost(&inst);
        prop_assert_eq!(social_cost(&inst, &witness).unwrap(), opt.clone());
        for alloc in common::all_allocations(inst.n(), inst.m()) {
            prop_assert!(opt <= social_cost(&inst, &alloc).unwrap());
        }
    }
}

#[test]
fn ido_instances_are_fixed_points() {
    let row = vec![rational::frac(1, 2), rational::frac(1, 3), rational::frac(1, 6)];
    let inst = Instance::with_uniform_costs(vec![row.clone(), row]).unwrap();
    let w = to_ido(&inst);
    assert_eq!(w.transformed, inst);
    assert!(w.permutations.iter().all(|p| *p == vec![0, 1, 2]));
}
