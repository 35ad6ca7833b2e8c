//! Allocation algorithms for identically ordered (IDO) instances and the
//! reduction that lifts them to arbitrary instances.
//!
//! All ties break to the lowest index. Invariant assertions are opt-in via
//! [`SolveOptions::assert_invariants`]; a violated invariant surfaces as
//! [`Error::InvariantViolation`].

mod bid_and_take;
mod envy_cycle;
mod ordinal;
mod reduction;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bid_and_take::bid_and_take;
pub use envy_cycle::{envy_cycle_eliminate, TopEnvyGraph};
pub use ordinal::{ordinal_unweighted, ordinal_unweighted_order, ordinal_weighted, AgentPartition};
pub use reduction::{pick_back, reduction_bijection};

use crate::error::{Error, Result};
use crate::instance::{to_ido, Allocation, IdoWitness, Instance};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    EnvyCycle,
    BidAndTake,
    Ordinal,
    OrdinalWeighted,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::EnvyCycle,
        Algorithm::BidAndTake,
        Algorithm::Ordinal,
        Algorithm::OrdinalWeighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::EnvyCycle => "envy-cycle",
            Algorithm::BidAndTake => "bid-and-take",
            Algorithm::Ordinal => "ordinal",
            Algorithm::OrdinalWeighted => "ordinal-weighted",
        }
    }

    /// Whether the algorithm honours unequal shares.
    pub fn is_weighted(self) -> bool {
        matches!(self, Algorithm::BidAndTake | Algorithm::OrdinalWeighted)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "envy-cycle" => Ok(Algorithm::EnvyCycle),
            "bid-and-take" => Ok(Algorithm::BidAndTake),
            "ordinal" => Ok(Algorithm::Ordinal),
            "ordinal-weighted" => Ok(Algorithm::OrdinalWeighted),
            _ => Err(Error::InvalidParams(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    pub assert_invariants: bool,
}

impl SolveOptions {
    pub fn checked() -> Self {
        SolveOptions {
            assert_invariants: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Assign {
        item: usize,
        agent: usize,
    },
    /// Every agent in `cycle` takes the bundle of the next one (wrapping).
    CycleResolved {
        cycle: Vec<usize>,
    },
    Deactivated {
        agent: usize,
        #[serde(with = "rational::text")]
        cost: Rational,
    },
}

/// Ordered record of an algorithm run; replaying it rebuilds the output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgorithmTrace {
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    pub events: Vec<TraceEvent>,
}

impl AlgorithmTrace {
    pub fn new(algorithm: Algorithm, n: usize, m: usize) -> Self {
        AlgorithmTrace {
            algorithm,
            n,
            m,
            events: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, e: TraceEvent) {
        self.events.push(e);
    }

    pub fn replay(&self) -> Allocation {
        let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for e in &self.events {
            match e {
                TraceEvent::Assign { item, agent } => bundles[*agent].push(*item),
                TraceEvent::CycleResolved { cycle } => {
                    let taken: Vec<Vec<usize>> = (0..cycle.len())
                        .map(|k| std::mem::take(&mut bundles[cycle[(k + 1) % cycle.len()]]))
                        .collect();
                    for (&a, b) in cycle.iter().zip(taken) {
                        bundles[a] = b;
                    }
                }
                TraceEvent::Deactivated { .. } => {}
            }
        }
        Allocation::new(bundles)
    }
}

/// Runs `algo` on an IDO instance.
pub fn run_ido(inst: &Instance, algo: Algorithm, opts: SolveOptions) -> Result<(Allocation, AlgorithmTrace)> {
    match algo {
        Algorithm::EnvyCycle => envy_cycle_eliminate(inst, opts),
        Algorithm::BidAndTake => bid_and_take(inst, opts),
        Algorithm::Ordinal => {
            let alloc = ordinal_unweighted(inst)?;
            Ok((alloc.clone(), assignment_trace(algo, inst.m(), &alloc)))
        }
        Algorithm::OrdinalWeighted => {
            let (alloc, part) = ordinal_weighted(inst)?;
            if opts.assert_invariants {
                part.check(inst, &alloc)?;
            }
            Ok((alloc.clone(), assignment_trace(algo, inst.m(), &alloc)))
        }
    }
}

fn assignment_trace(algo: Algorithm, m: usize, alloc: &Allocation) -> AlgorithmTrace {
    let mut trace = AlgorithmTrace::new(algo, alloc.n(), m);
    for (item, owner) in alloc.owners(m).into_iter().enumerate() {
        if let Some(agent) = owner {
            trace.push(TraceEvent::Assign { item, agent });
        }
    }
    trace
}

/// Everything produced by a run through the reduction.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub allocation: Allocation,
    pub ido: IdoWitness,
    /// Output of the IDO algorithm on the transformed instance.
    pub inner: Allocation,
    pub trace: AlgorithmTrace,
    pub partition: Option<AgentPartition>,
}

/// Solves any instance: sort each agent's costs, run the IDO algorithm,
/// then let owners of the IDO items pick real items from the cheapest end.
pub fn solve_general(inst: &Instance, algo: Algorithm) -> Result<Allocation> {
    Ok(solve_general_with(inst, algo, SolveOptions::default())?.allocation)
}

pub fn solve_general_with(inst: &Instance, algo: Algorithm, opts: SolveOptions) -> Result<SolveOutcome> {
    let ido = to_ido(inst);
    let (inner, trace) = run_ido(&ido.transformed, algo, opts)?;
    let partition = match algo {
        Algorithm::OrdinalWeighted => Some(ordinal_weighted(&ido.transformed)?.1),
        _ => None,
    };
    let allocation = pick_back(inst, &inner);
    if opts.assert_invariants && reduction_bijection(inst, &ido, &inner, &allocation).is_none() {
        return Err(Error::InvariantViolation(
            "picked bundles are not dominated by the IDO bundles".into(),
        ));
    }
    Ok(SolveOutcome {
        allocation,
        ido,
        inner,
        trace,
        partition,
    })
}
