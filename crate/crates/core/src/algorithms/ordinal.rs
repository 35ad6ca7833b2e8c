//! Ordinal algorithms: they see only the common item order (and, for the
//! weighted variant, the shares), never cardinal costs.
//!
//! Both split agents into a group that receives one large item each and a
//! group that shares the remaining small items round-robin.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fairness::check_weighted_rr_inequality;
use crate::instance::{require_ido, Allocation, Instance};
use crate::rational::{self, Rational};

/// Unweighted ordinal allocation on an IDO instance.
pub fn ordinal_unweighted(inst: &Instance) -> Result<Allocation> {
    require_ido(inst)?;
    Ok(ordinal_unweighted_order(inst.n(), inst.m()))
}

/// Agents `0..⌊n/2⌋` take items `0..⌊n/2⌋`; the rest are dealt cyclically to
/// agents `⌊n/2⌋..n` in increasing order.
pub fn ordinal_unweighted_order(n: usize, m: usize) -> Allocation {
    let half = n / 2;
    let group = n - half;
    let mut bundles = vec![Vec::new(); n];
    for item in 0..m {
        let agent = if item < half { item } else { half + (item - half) % group };
        bundles[agent].push(item);
    }
    Allocation::new(bundles)
}

/// The split used by the weighted ordinal algorithm, in original agent
/// indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentPartition {
    /// Agents receiving a single large item.
    pub n1: Vec<usize>,
    /// Agents sharing the small items.
    pub n2: Vec<usize>,
    /// `|N1|`: the longest prefix of ascending shares summing to ≤ 1/2.
    pub i_star: usize,
    pub large_items: Vec<usize>,
    pub small_items: Vec<usize>,
    /// Agents ordered by ascending share (stable); position = rank.
    pub agent_order: Vec<usize>,
    /// First item each agent received, if any.
    pub first_items: Vec<Option<usize>>,
}

impl AgentPartition {
    /// Structural checks on the split plus the weighted round-robin
    /// inequality on `N2`.
    pub fn check(&self, inst: &Instance, alloc: &Allocation) -> Result<()> {
        let half = rational::frac(1, 2);
        let w1 = rational::sum(self.n1.iter().map(|&i| inst.weight(i)));
        if w1 > half {
            return Err(Error::InvariantViolation(format!("N1 weight {w1} exceeds 1/2")));
        }
        if self.i_star < inst.n() / 2 {
            return Err(Error::InvariantViolation(format!(
                "i* = {} below n/2 for n = {}",
                self.i_star,
                inst.n()
            )));
        }
        let floor = Rational::new(1.into(), (2 * (self.i_star as i64 + 1)).into());
        if let Some(&i) = self.n2.iter().find(|&&i| *inst.weight(i) < floor) {
            return Err(Error::InvariantViolation(format!("N2 agent {i} has share below 1/(2(i*+1))")));
        }
        if !check_weighted_rr_inequality(inst, alloc, &self.first_items, &self.n2)? {
            return Err(Error::InvariantViolation("weighted round-robin inequality fails on N2".into()));
        }
        Ok(())
    }
}

/// Weighted ordinal allocation on an IDO instance. Agents are ranked by
/// ascending share (ties by index) before the split.
pub fn ordinal_weighted(inst: &Instance) -> Result<(Allocation, AgentPartition)> {
    require_ido(inst)?;
    let n = inst.n();
    let m = inst.m();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inst.weight(a).cmp(inst.weight(b)).then(a.cmp(&b)));
    let sorted: Vec<Rational> = order.iter().map(|&i| inst.weight(i).clone()).collect();

    let half = rational::frac(1, 2);
    let mut prefix = Rational::zero();
    let mut i_star = 0;
    for s in &sorted {
        prefix += s;
        if prefix > half {
            break;
        }
        i_star += 1;
    }

    let mut ranked: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (rank, bundle) in ranked.iter_mut().enumerate().take(i_star.min(m)) {
        bundle.push(rank);
    }
    for item in i_star..m {
        let rank = (i_star..n)
            .min_by(|&a, &b| {
                // |X_a| / s_a vs |X_b| / s_b, cross-multiplied
                let lhs = &sorted[b] * Rational::from_integer((ranked[a].len() as i64).into());
                let rhs = &sorted[a] * Rational::from_integer((ranked[b].len() as i64).into());
                lhs.cmp(&rhs).then(a.cmp(&b))
            })
            .ok_or_else(|| Error::InvariantViolation("no agent left for the small items".into()))?;
        if sorted[rank].is_zero() {
            return Err(Error::ZeroShareInN2 { agent: order[rank] });
        }
        ranked[rank].push(item);
    }

    let mut bundles = vec![Vec::new(); n];
    let mut first_items = vec![None; n];
    for (rank, items) in ranked.into_iter().enumerate() {
        first_items[order[rank]] = items.first().copied();
        bundles[order[rank]] = items;
    }
    let partition = AgentPartition {
        n1: order[..i_star].to_vec(),
        n2: order[i_star..].to_vec(),
        i_star,
        large_items: (0..i_star.min(m)).collect(),
        small_items: (i_star.min(m)..m).collect(),
        agent_order: order,
        first_items,
    };
    Ok((Allocation::new(bundles), partition))
}
