//! Bid-and-take: items from the costliest down each go to the cheapest
//! active agent; an agent leaves the active set once her cost strictly
//! exceeds her weighted proportional share.
//!
//! Bids compare costs relative to each agent's total `c_i(M)`, so the
//! outcome does not depend on how rows are scaled.

use num_traits::Zero;

use super::{Algorithm, AlgorithmTrace, SolveOptions, TraceEvent};
use crate::error::{Error, Result};
use crate::fairness::{prop_share, residual_cost, UpTo};
use crate::instance::{require_ido, Allocation, Instance};
use crate::rational::{self, Rational};

pub fn bid_and_take(inst: &Instance, opts: SolveOptions) -> Result<(Allocation, AlgorithmTrace)> {
    require_ido(inst)?;
    let n = inst.n();
    let shares: Vec<Rational> = (0..n).map(|i| prop_share(inst, i)).collect();
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut spent = vec![Rational::zero(); n];
    let mut active = vec![true; n];
    let mut trace = AlgorithmTrace::new(Algorithm::BidAndTake, n, inst.m());
    let relative: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let total = inst.total_cost(i);
            inst.row(i)
                .iter()
                .map(|c| if total.is_zero() { Rational::zero() } else { c / &total })
                .collect()
        })
        .collect();

    for item in 0..inst.m() {
        let winner = (0..n)
            .filter(|&i| active[i])
            .min_by(|&a, &b| relative[a][item].cmp(&relative[b][item]).then(a.cmp(&b)))
            .ok_or_else(|| Error::InvariantViolation(format!("no active agent left for item {item}")))?;
        bundles[winner].push(item);
        spent[winner] += inst.cost(winner, item);
        trace.push(TraceEvent::Assign { item, agent: winner });
        if spent[winner] > shares[winner] {
            active[winner] = false;
            trace.push(TraceEvent::Deactivated {
                agent: winner,
                cost: spent[winner].clone(),
            });
        }
        if opts.assert_invariants {
            check_active_pairs(&relative, &bundles, &active)?;
        }
    }

    if opts.assert_invariants {
        for i in 0..n {
            if residual_cost(inst, i, &bundles[i], UpTo::Any) > shares[i] {
                return Err(Error::InvariantViolation(format!(
                    "agent {i} exceeds her share after removing her cheapest item"
                )));
            }
        }
    }
    Ok((Allocation::new(bundles), trace))
}

/// For active `i, i'`: `c_i(X_{i'}) ≥ c_{i'}(X_{i'})` in relative costs.
fn check_active_pairs(relative: &[Vec<Rational>], bundles: &[Vec<usize>], active: &[bool]) -> Result<()> {
    let act: Vec<usize> = (0..bundles.len()).filter(|&i| active[i]).collect();
    let cost = |i: usize, items: &[usize]| rational::sum(items.iter().map(|&j| &relative[i][j]));
    for &i in &act {
        for &k in &act {
            if i != k && cost(i, &bundles[k]) < cost(k, &bundles[k]) {
                return Err(Error::InvariantViolation(format!(
                    "active agent {i} values the bundle of active agent {k} below its holder"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::check_propx;
    use crate::rational::{frac, int};

    fn r1() -> Instance {
        let row = vec![frac(2, 5), frac(3, 10), frac(1, 5), frac(1, 10)];
        Instance::with_uniform_costs(vec![row.clone(), row]).unwrap()
    }

    #[test]
    fn uniform_trace() {
        let (alloc, trace) = bid_and_take(&r1(), SolveOptions::checked()).unwrap();
        assert_eq!(alloc.bundles, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(
            trace.events[..3],
            [
                TraceEvent::Assign { item: 0, agent: 0 },
                TraceEvent::Assign { item: 1, agent: 0 },
                TraceEvent::Deactivated {
                    agent: 0,
                    cost: frac(7, 10)
                },
            ]
        );
        assert_eq!(trace.replay(), alloc);
        assert!(check_propx(&r1(), &alloc, UpTo::Any).unwrap().holds);
    }

    #[test]
    fn weighted_trace() {
        let w1 = r1().with_weights(vec![frac(1, 4), frac(3, 4)]).unwrap();
        let (alloc, _) = bid_and_take(&w1, SolveOptions::checked()).unwrap();
        assert_eq!(alloc.bundles, vec![vec![0], vec![1, 2, 3]]);
        let rep = check_propx(&w1, &alloc, UpTo::Any).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn agent_exactly_at_share_stays_active() {
        let inst = Instance::with_uniform_costs(vec![
            vec![frac(1, 2), frac(1, 4), frac(1, 4)],
            vec![frac(1, 2), frac(1, 2), frac(0, 1)],
        ])
        .unwrap();
        let (alloc, _) = bid_and_take(&inst, SolveOptions::checked()).unwrap();
        // Agent 0 sits at exactly 1/2 after item 0 and still wins item 1.
        assert_eq!(alloc.bundles, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn row_scaling_does_not_change_bids() {
        let row = vec![int(1), int(1), int(0)];
        let scaled = Instance::new(
            vec![vec![int(10), int(0), int(0)], row],
            vec![frac(2, 3), frac(1, 3)],
        )
        .unwrap();
        // Raw costs would send item 0 to agent 1 and then strand item 2.
        let (alloc, _) = bid_and_take(&scaled, SolveOptions::checked()).unwrap();
        assert_eq!(alloc.bundles, vec![vec![1, 2], vec![0]]);
    }
}
