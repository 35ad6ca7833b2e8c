//! Exact maximin share by branch and bound over `n`-partitions.

use num_bigint::BigInt;
use num_traits::{Num, ToPrimitive};

use super::{CancelToken, OracleConfig, OracleNotion, OracleValue, Witness};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::{self, Rational};

pub fn exact_mms(inst: &Instance, agent: usize, cfg: &OracleConfig) -> Result<OracleValue> {
    let n = inst.n();
    let (ints, denom) = rational::scale_to_integers(inst.row(agent));
    let total: BigInt = ints.iter().sum();

    let (best, assign) = if total.to_i128().is_some_and(|t| t < i128::MAX / (n as i128 + 2)) {
        let small: Vec<i128> = ints.iter().map(|v| v.to_i128().expect("fits")).collect();
        let (v, a) = min_max_partition(&small, n, cfg.mms_node_budget, cfg.cancel.as_ref())?;
        (BigInt::from(v), a)
    } else {
        min_max_partition(&ints, n, cfg.mms_node_budget, cfg.cancel.as_ref())?
    };

    let mut bundles = vec![Vec::new(); n];
    for (item, &b) in assign.iter().enumerate() {
        bundles[b].push(item);
    }
    Ok(OracleValue {
        agent,
        notion: OracleNotion::Mms,
        value: Rational::new(best, denom),
        witness: Some(Witness::Partition { bundles }),
        cover: None,
    })
}

struct Search<'a, T> {
    costs: &'a [T],
    order: Vec<usize>,
    n: usize,
    loads: Vec<T>,
    assign: Vec<usize>,
    best: T,
    best_assign: Vec<usize>,
    floor: T,
    nodes: u64,
    budget: u64,
    cancel: Option<&'a CancelToken>,
}

/// Minimizes the largest bundle sum. Returns the optimum and, for every
/// item, the bundle it lands in.
pub(crate) fn min_max_partition<T>(
    costs: &[T],
    n: usize,
    budget: u64,
    cancel: Option<&CancelToken>,
) -> Result<(T, Vec<usize>)>
where
    T: Num + Clone + Ord + From<u32>,
{
    let m = costs.len();
    if cancel.is_some_and(|c| c.is_cancelled()) {
        return Err(Error::Cancelled);
    }
    if m == 0 {
        return Ok((T::zero(), Vec::new()));
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| costs[b].cmp(&costs[a]).then(a.cmp(&b)));

    // Longest-processing-time start.
    let mut loads = vec![T::zero(); n];
    let mut assign = vec![0; m];
    for &j in &order {
        let b = (0..n).min_by(|&x, &y| loads[x].cmp(&loads[y]).then(x.cmp(&y))).expect("n >= 1");
        loads[b] = loads[b].clone() + costs[j].clone();
        assign[j] = b;
    }
    let lpt = loads.iter().max().cloned().expect("n >= 1");

    // max(largest item, ⌈total / n⌉)
    let total = costs.iter().cloned().fold(T::zero(), |a, c| a + c);
    let nn = T::from(n as u32);
    let mut ceil_avg = total.clone() / nn.clone();
    if ceil_avg.clone() * nn != total {
        ceil_avg = ceil_avg + T::one();
    }
    let floor = std::cmp::max(costs[order[0]].clone(), ceil_avg);

    let mut s = Search {
        costs,
        order,
        n,
        loads: vec![T::zero(); n],
        assign: vec![0; m],
        best: lpt,
        best_assign: assign,
        floor,
        nodes: 0,
        budget,
        cancel,
    };
    if s.best > s.floor {
        s.dfs(0, T::zero())?;
    }
    Ok((s.best, s.best_assign))
}

impl<T> Search<'_, T>
where
    T: Num + Clone + Ord,
{
    fn dfs(&mut self, k: usize, current: T) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                what: "maximin share search".into(),
                budget: self.budget,
            });
        }
        if self.nodes % 1024 == 1 && self.cancel.is_some_and(|c| c.is_cancelled()) {
            return Err(Error::Cancelled);
        }
        if k == self.order.len() {
            if current < self.best {
                self.best = current;
                self.best_assign = self.assign.clone();
            }
            return Ok(());
        }
        let item = self.order[k];
        let c = self.costs[item].clone();
        for b in 0..self.n {
            // Bundles with equal load are interchangeable.
            if self.loads[..b].contains(&self.loads[b]) {
                continue;
            }
            let next = self.loads[b].clone() + c.clone();
            if next >= self.best {
                continue;
            }
            let prev = std::mem::replace(&mut self.loads[b], next.clone());
            self.assign[item] = b;
            let cur = std::cmp::max(current.clone(), next);
            self.dfs(k + 1, cur)?;
            self.loads[b] = prev;
            if self.best <= self.floor {
                return Ok(());
            }
        }
        Ok(())
    }
}
