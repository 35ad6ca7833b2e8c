//! Exact AnyPrice share for chores.
//!
//! `APS_i ≥ t` holds exactly when some reward vector on the unit simplex
//! gives every set cheaper than `t` a total reward strictly below `s_i`.
//! Only subset costs can be values of the inner minimum, so the oracle binary
//! searches the sorted distinct subset costs for the largest threshold that
//! passes this test.
//!
//! For a threshold `t` the strict system is decided through the packing LP
//! `max Σ r_j  s.t.  r(S) ≤ s_i  for every S with c(S) < t,  r ≥ 0`:
//! the strict system is solvable iff the LP value exceeds one (or the LP is
//! unbounded, which happens when some single item costs at least `t`).
//! Constraints are added lazily: start from singletons, solve, add the cheap
//! set of largest reward, repeat. A dual solution of the final LP is a
//! fractional cover of the items by cheap sets of total weight at most
//! `1/s_i`, which certifies that `t` is not attainable.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::lp::{self, LpOutcome};
use super::{CoverCertificate, OracleConfig, OracleNotion, OracleValue, Witness};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::{self, Rational};

/// Hard cap on the subset table (2^m entries).
const MAX_ITEMS: usize = 24;

pub fn exact_aps(inst: &Instance, agent: usize, cfg: &OracleConfig) -> Result<OracleValue> {
    let m = inst.m();
    let limit = cfg.aps_max_items.min(MAX_ITEMS);
    if m > limit {
        return Err(Error::BudgetExceeded {
            what: format!("AnyPrice share subset enumeration over {m} items"),
            budget: limit as u64,
        });
    }
    let share = inst.weight(agent).clone();
    let row = inst.row(agent);
    let value = |v: Rational, witness: Option<Witness>, cover: Option<CoverCertificate>| OracleValue {
        agent,
        notion: OracleNotion::Aps,
        value: v,
        witness,
        cover,
    };
    if m == 0 {
        return Ok(value(Rational::zero(), None, None));
    }
    if share.is_zero() {
        // The empty set always repays a zero loan.
        return Ok(value(Rational::zero(), Some(unit_rewards(m, 0)), None));
    }

    let (costs, denom) = rational::scale_to_integers(row);
    let table = SubsetTable::new(&costs);
    let mut candidates: Vec<BigInt> = table.costs.clone();
    candidates.sort();
    candidates.dedup();

    let search = ThresholdSearch {
        costs: &costs,
        table: &table,
        share: &share,
        cfg,
    };

    // candidates[0] = 0 is always attainable: nothing is cheaper than it.
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    let mut witness = unit_rewards(m, argmax(&costs));
    let mut cover: Option<CoverCertificate> = None;
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        match search.decide(&candidates[mid])? {
            Decision::Attainable(r) => {
                lo = mid;
                witness = Witness::Rewards { rewards: r };
            }
            Decision::Blocked(sets, weights) => {
                hi = mid - 1;
                cover = Some(CoverCertificate {
                    threshold: Rational::new(candidates[mid].clone(), denom.clone()),
                    sets: sets.into_iter().map(|s| mask_items(s, m)).collect(),
                    weights,
                });
            }
        }
    }
    Ok(value(
        Rational::new(candidates[lo].clone(), denom),
        Some(witness),
        cover,
    ))
}

/// `min { c_i(S) : r(S) ≥ s_i }` by enumeration; re-evaluates a reward witness.
pub fn cheapest_repaying_set(row: &[Rational], share: &Rational, rewards: &[Rational]) -> Rational {
    let m = row.len();
    (0u64..1 << m)
        .filter_map(|mask| {
            let items = (0..m).filter(|&j| mask >> j & 1 == 1);
            let r: Rational = items.clone().map(|j| &rewards[j]).sum();
            (r >= *share).then(|| items.map(|j| &row[j]).sum())
        })
        .min()
        .expect("the full set repays any share ≤ 1")
}

enum Decision {
    Attainable(Vec<Rational>),
    Blocked(Vec<u32>, Vec<Rational>),
}

struct SubsetTable {
    costs: Vec<BigInt>,
}

impl SubsetTable {
    fn new(items: &[BigInt]) -> Self {
        let m = items.len();
        let mut costs = vec![BigInt::zero(); 1 << m];
        for mask in 1usize..1 << m {
            let low = mask.trailing_zeros() as usize;
            costs[mask] = &costs[mask & (mask - 1)] + &items[low];
        }
        SubsetTable { costs }
    }
}

struct ThresholdSearch<'a> {
    costs: &'a [BigInt],
    table: &'a SubsetTable,
    share: &'a Rational,
    cfg: &'a OracleConfig,
}

impl ThresholdSearch<'_> {
    fn decide(&self, t: &BigInt) -> Result<Decision> {
        let m = self.costs.len();
        if let Some(j) = self.costs.iter().position(|c| c >= t) {
            // Put all reward on an item that alone costs ≥ t.
            return Ok(Decision::Attainable(unit_rewards_vec(m, j)));
        }
        let mut sets: Vec<u32> = (0..m).map(|j| 1u32 << j).collect();
        loop {
            if self.cfg.cancel.as_ref().is_some_and(|c| c.is_cancelled()) {
                return Err(Error::Cancelled);
            }
            let a: Vec<Vec<Rational>> = sets
                .iter()
                .map(|&s| (0..m).map(|j| Rational::from_integer(i64::from(s >> j & 1).into())).collect())
                .collect();
            let b = vec![self.share.clone(); sets.len()];
            let ones = vec![Rational::one(); m];
            let (x, v, duals) = match lp::maximize(&ones, &a, &b) {
                LpOutcome::Optimal { x, value, duals } => (x, value, duals),
                LpOutcome::Unbounded => unreachable!("every item lies in a singleton constraint"),
            };
            if v <= Rational::one() {
                let (kept, weights): (Vec<u32>, Vec<Rational>) = sets
                    .iter()
                    .zip(duals)
                    .filter(|(_, y)| y.is_positive())
                    .map(|(&s, y)| (s, y))
                    .unzip();
                return Ok(Decision::Blocked(kept, weights));
            }
            match self.most_rewarded_cheap_set(&x, t) {
                Some(s) => sets.push(s),
                None => return Ok(Decision::Attainable(x.iter().map(|r| r / &v).collect())),
            }
        }
    }

    /// The cheap set (`c(S) < t`) with the largest reward, if that reward
    /// exceeds the share; `None` when `x` satisfies every cheap constraint.
    fn most_rewarded_cheap_set(&self, x: &[Rational], t: &BigInt) -> Option<u32> {
        let m = x.len();
        let d = rational::common_denominator(x);
        let dr = Rational::from_integer(d.clone());
        let scaled: Vec<BigInt> = x.iter().map(|r| (r * &dr).to_integer()).collect();
        let mut reward = vec![BigInt::zero(); 1 << m];
        let mut best: Option<(usize, BigInt)> = None;
        for mask in 1usize..1 << m {
            let low = mask.trailing_zeros() as usize;
            reward[mask] = &reward[mask & (mask - 1)] + &scaled[low];
            if self.table.costs[mask] < *t && best.as_ref().is_none_or(|(_, r)| reward[mask] > *r) {
                best = Some((mask, reward[mask].clone()));
            }
        }
        let (mask, r) = best?;
        // r / d > share ?
        (Rational::new(r, d) > *self.share).then_some(mask as u32)
    }
}

fn argmax(costs: &[BigInt]) -> usize {
    (0..costs.len())
        .max_by(|&a, &b| costs[a].cmp(&costs[b]).then(b.cmp(&a)))
        .unwrap_or(0)
}

fn unit_rewards_vec(m: usize, j: usize) -> Vec<Rational> {
    (0..m)
        .map(|k| if k == j { Rational::one() } else { Rational::zero() })
        .collect()
}

fn unit_rewards(m: usize, j: usize) -> Witness {
    Witness::Rewards {
        rewards: unit_rewards_vec(m, j),
    }
}

fn mask_items(mask: u32, m: usize) -> Vec<usize> {
    (0..m).filter(|&j| mask >> j & 1 == 1).collect()
}
