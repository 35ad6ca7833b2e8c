//! Top-trading envy-cycle elimination, allocating items from the costliest.

use super::{AlgorithmTrace, SolveOptions, TraceEvent};
use crate::algorithms::Algorithm;
use crate::error::{Error, Result};
use crate::fairness::{check_envy_partial, UpTo};
use crate::instance::{require_ido, Allocation, Instance};
use crate::rational::Rational;

/// Each agent points to the holder of her cheapest bundle when she strictly
/// prefers it to her own; sinks point nowhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopEnvyGraph {
    pub out_edge: Vec<Option<usize>>,
}

impl TopEnvyGraph {
    pub fn build(inst: &Instance, bundles: &[Vec<usize>]) -> Self {
        let n = bundles.len();
        let out_edge = (0..n)
            .map(|i| {
                let costs: Vec<Rational> = bundles.iter().map(|b| inst.bundle_cost(i, b)).collect();
                let target = (0..n)
                    .min_by(|&a, &b| costs[a].cmp(&costs[b]).then(a.cmp(&b)))
                    .expect("n >= 1");
                (costs[i] > costs[target]).then_some(target)
            })
            .collect();
        TopEnvyGraph { out_edge }
    }

    pub fn sinks(&self) -> impl Iterator<Item = usize> + '_ {
        self.out_edge
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.is_none().then_some(i))
    }

    /// Follows pointers from `start` until a node repeats.
    pub fn cycle_from(&self, start: usize) -> Option<Vec<usize>> {
        let mut seen = vec![None; self.out_edge.len()];
        let mut path = Vec::new();
        let mut v = start;
        loop {
            if let Some(pos) = seen[v] {
                return Some(path[pos..].to_vec());
            }
            seen[v] = Some(path.len());
            path.push(v);
            v = self.out_edge[v]?;
        }
    }
}

pub fn envy_cycle_eliminate(inst: &Instance, opts: SolveOptions) -> Result<(Allocation, AlgorithmTrace)> {
    require_ido(inst)?;
    let n = inst.n();
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut trace = AlgorithmTrace::new(Algorithm::EnvyCycle, n, inst.m());

    for item in 0..inst.m() {
        let mut graph = TopEnvyGraph::build(inst, &bundles);
        if graph.sinks().next().is_none() {
            let cycle = graph
                .cycle_from(0)
                .ok_or_else(|| Error::InvariantViolation("sink-free envy graph without a cycle".into()))?;
            let rotated: Vec<Vec<usize>> = (0..cycle.len())
                .map(|k| bundles[cycle[(k + 1) % cycle.len()]].clone())
                .collect();
            for (&a, b) in cycle.iter().zip(rotated) {
                bundles[a] = b;
            }
            trace.push(TraceEvent::CycleResolved { cycle: cycle.clone() });
            graph = TopEnvyGraph::build(inst, &bundles);
            if opts.assert_invariants {
                if let Some(&a) = cycle.iter().find(|&&a| graph.out_edge[a].is_some()) {
                    return Err(Error::InvariantViolation(format!(
                        "agent {a} still envies after cycle resolution"
                    )));
                }
                assert_partial_efx(inst, &bundles, "cycle resolution")?;
            }
        }
        let sink = graph
            .sinks()
            .next()
            .ok_or_else(|| Error::InvariantViolation("no sink after cycle resolution".into()))?;
        bundles[sink].push(item);
        trace.push(TraceEvent::Assign { item, agent: sink });
        if opts.assert_invariants {
            assert_partial_efx(inst, &bundles, "item addition")?;
        }
    }
    Ok((Allocation::new(bundles), trace))
}

fn assert_partial_efx(inst: &Instance, bundles: &[Vec<usize>], step: &str) -> Result<()> {
    let partial = Allocation::partial(bundles.to_vec());
    if check_envy_partial(inst, &partial, UpTo::Any)?.holds {
        Ok(())
    } else {
        Err(Error::InvariantViolation(format!("partial allocation not EFX after {step}")))
    }
}
