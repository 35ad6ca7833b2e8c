//! Lifting an allocation of the IDO transform back to the original items.

use crate::instance::{Allocation, IdoWitness, Instance};

/// Walks the IDO items from the cheapest; the owner of each takes her
/// cheapest original item still available (lowest index on ties).
pub fn pick_back(inst: &Instance, inner: &Allocation) -> Allocation {
    let m = inst.m();
    let owners = inner.owners(m);
    let mut taken = vec![false; m];
    let mut bundles = vec![Vec::new(); inst.n()];
    for j in (0..m).rev() {
        let Some(agent) = owners[j] else { continue };
        let pick = (0..m)
            .filter(|&k| !taken[k])
            .min_by(|&a, &b| inst.cost(agent, a).cmp(inst.cost(agent, b)).then(a.cmp(&b)))
            .expect("at least as many free items as unprocessed IDO items");
        taken[pick] = true;
        bundles[agent].push(pick);
    }
    Allocation::new(bundles)
}

/// Per agent, pairs `(original item, IDO item)` such that each original item
/// costs no more than its partner in the transformed instance. `None` when
/// bundle sizes differ or no such pairing exists.
pub fn reduction_bijection(
    inst: &Instance,
    ido: &IdoWitness,
    inner: &Allocation,
    outer: &Allocation,
) -> Option<Vec<Vec<(usize, usize)>>> {
    let mut pairs = Vec::with_capacity(inst.n());
    for i in 0..inst.n() {
        let mut out = outer.bundle(i).to_vec();
        let mut inn = inner.bundle(i).to_vec();
        if out.len() != inn.len() {
            return None;
        }
        out.sort_by(|&a, &b| inst.cost(i, b).cmp(inst.cost(i, a)).then(a.cmp(&b)));
        inn.sort_by(|&a, &b| ido.transformed.cost(i, b).cmp(ido.transformed.cost(i, a)).then(a.cmp(&b)));
        let row: Vec<(usize, usize)> = out.into_iter().zip(inn).collect();
        if row.iter().any(|&(o, k)| inst.cost(i, o) > ido.transformed.cost(i, k)) {
            return None;
        }
        pairs.push(row);
    }
    Some(pairs)
}
