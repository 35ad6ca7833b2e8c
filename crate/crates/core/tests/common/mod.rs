#![allow(dead_code)]

use choresolver::instance::{to_ido, uniform_weights};
use choresolver::rational::frac;
use choresolver::{Allocation, Instance};
use proptest::prelude::*;

/// Small integer costs (many ties and zeros), optionally with random shares.
pub fn instance(max_n: usize, max_m: usize, weighted: bool) -> impl Strategy<Value = Instance> {
    (1..=max_n, 0..=max_m)
        .prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(prop::collection::vec(0i64..8, m), n),
                prop::collection::vec(1i64..6, n),
            )
        })
        .prop_map(move |(rows, w)| {
            let n = rows.len();
            let costs = rows.into_iter().map(|r| r.into_iter().map(|c| frac(c, 1)).collect()).collect();
            let weights = if weighted {
                let total: i64 = w.iter().sum();
                w.into_iter().map(|x| frac(x, total)).collect()
            } else {
                uniform_weights(n)
            };
            Instance::new(costs, weights).unwrap()
        })
}

/// Same as [`instance`] but every row has positive total cost.
pub fn positive_instance(max_n: usize, max_m: usize, weighted: bool) -> impl Strategy<Value = Instance> {
    instance(max_n, max_m.max(1), weighted)
        .prop_filter("needs m >= 1 and positive rows", |inst| {
            inst.m() >= 1 && (0..inst.n()).all(|i| inst.total_cost(i) > frac(0, 1))
        })
}

pub fn ido_instance(max_n: usize, max_m: usize, weighted: bool) -> impl Strategy<Value = Instance> {
    instance(max_n, max_m, weighted).prop_map(|inst| to_ido(&inst).transformed)
}

/// An instance together with an arbitrary complete allocation of it.
pub fn with_allocation(inst: impl Strategy<Value = Instance>) -> impl Strategy<Value = (Instance, Allocation)> {
    inst.prop_flat_map(|inst| {
        let (n, m) = (inst.n(), inst.m());
        (Just(inst), prop::collection::vec(0..n, m))
    })
    .prop_map(|(inst, owners)| {
        let alloc = allocation_from_owners(inst.n(), &owners);
        (inst, alloc)
    })
}

pub fn allocation_from_owners(n: usize, owners: &[usize]) -> Allocation {
    let mut bundles = vec![Vec::new(); n];
    for (item, &a) in owners.iter().enumerate() {
        bundles[a].push(item);
    }
    Allocation::new(bundles)
}

/// Every complete allocation of `m` items to `n` agents.
pub fn all_allocations(n: usize, m: usize) -> impl Iterator<Item = Allocation> {
    let total = (n as u64).pow(m as u32);
    (0..total).map(move |mut code| {
        let owners: Vec<usize> = (0..m)
            .map(|_| {
                let a = (code % n as u64) as usize;
                code /= n as u64;
                a
            })
            .collect();
        allocation_from_owners(n, &owners)
    })
}
