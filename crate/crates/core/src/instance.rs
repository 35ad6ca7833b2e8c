//! Chore-division instances, allocations and the identical-ordering transform.
//!
//! Agents and items are 0-based everywhere. An [`Instance`] owns an `n × m`
//! matrix of non-negative rational costs and a weight (share) vector summing
//! to one. Rows are not required to sum to one; every share-based quantity is
//! measured against `c_i(M)`, so normalized and unnormalized instances give
//! the same ratios.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    costs: Vec<Vec<Rational>>,
    weights: Vec<Rational>,
}

impl Instance {
    /// Validates shape, non-negativity and `Σ weights = 1`.
    pub fn new(costs: Vec<Vec<Rational>>, weights: Vec<Rational>) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::DimensionMismatch("at least one agent is required".into()));
        }
        let m = costs[0].len();
        if let Some(i) = costs.iter().position(|r| r.len() != m) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} costs, expected {m}",
                costs[i].len()
            )));
        }
        if weights.len() != costs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} agents",
                weights.len(),
                costs.len()
            )));
        }
        for (i, row) in costs.iter().enumerate() {
            if let Some(j) = row.iter().position(|c| c.is_negative()) {
                return Err(Error::NonNegativityViolation {
                    what: format!("cost c[{i}][{j}]"),
                });
            }
        }
        if let Some(i) = weights.iter().position(|s| s.is_negative()) {
            return Err(Error::NonNegativityViolation {
                what: format!("weight s[{i}]"),
            });
        }
        let total = rational::sum(&weights);
        if !total.is_one() {
            return Err(Error::WeightSumMismatch { sum: total });
        }
        Ok(Instance { costs, weights })
    }

    /// Same costs with every agent sharing `1/n`.
    pub fn with_uniform_costs(costs: Vec<Vec<Rational>>) -> Result<Self> {
        let n = costs.len().max(1);
        let w = uniform_weights(n);
        Instance::new(costs, w)
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn m(&self) -> usize {
        self.costs[0].len()
    }

    pub fn costs(&self) -> &[Vec<Rational>] {
        &self.costs
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.costs[agent]
    }

    pub fn cost(&self, agent: usize, item: usize) -> &Rational {
        &self.costs[agent][item]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, agent: usize) -> &Rational {
        &self.weights[agent]
    }

    /// `c_i(M)`.
    pub fn total_cost(&self, agent: usize) -> Rational {
        rational::sum(&self.costs[agent])
    }

    /// `c_i(S)` for an arbitrary item set.
    pub fn bundle_cost(&self, agent: usize, items: &[usize]) -> Rational {
        rational::sum(items.iter().map(|&j| &self.costs[agent][j]))
    }

    pub fn has_uniform_weights(&self) -> bool {
        let u = Rational::new(1.into(), (self.n() as i64).into());
        self.weights.iter().all(|w| *w == u)
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.n()).all(|i| self.total_cost(i).is_one())
    }

    pub fn with_uniform_weights(&self) -> Instance {
        Instance {
            costs: self.costs.clone(),
            weights: uniform_weights(self.n()),
        }
    }

    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<Instance> {
        Instance::new(self.costs.clone(), weights)
    }

    /// Divides every row by its sum.
    pub fn normalized(&self) -> Result<Instance> {
        let mut costs = Vec::with_capacity(self.n());
        for (i, row) in self.costs.iter().enumerate() {
            let total = rational::sum(row);
            if row.is_empty() {
                costs.push(Vec::new());
                continue;
            }
            if total.is_zero() {
                return Err(Error::ZeroTotalCost { agent: i });
            }
            costs.push(row.iter().map(|c| c / &total).collect());
        }
        Ok(Instance {
            costs,
            weights: self.weights.clone(),
        })
    }

    pub fn to_doc(&self, normalize: bool) -> InstanceDoc {
        InstanceDoc {
            n: self.n(),
            m: self.m(),
            costs: self.costs.clone(),
            weights: Some(self.weights.clone()),
            normalize,
        }
    }
}

pub fn uniform_weights(n: usize) -> Vec<Rational> {
    vec![Rational::new(1.into(), (n as i64).into()); n]
}

/// Wire format of an instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub n: usize,
    pub m: usize,
    #[serde(with = "costs_text")]
    pub costs: Vec<Vec<Rational>>,
    #[serde(default, with = "weights_text", skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Rational>>,
    #[serde(default)]
    pub normalize: bool,
}

mod costs_text {
    use super::*;
    use crate::rational::RationalText;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|row| row.iter().map(rational::format).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<RationalText>>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|row| row.into_iter().map(|r| r.0).collect())
            .collect())
    }
}

mod weights_text {
    use super::*;
    use crate::rational::RationalText;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(w) => s.collect_seq(w.iter().map(rational::format)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        let raw = Option::<Vec<RationalText>>::deserialize(d)?;
        Ok(raw.map(|w| w.into_iter().map(|r| r.0).collect()))
    }
}

impl InstanceDoc {
    /// Builds and validates the instance, normalizing rows when requested.
    /// Missing weights default to uniform shares.
    pub fn into_instance(self) -> Result<Instance> {
        if self.costs.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "n = {} but {} cost rows given",
                self.n,
                self.costs.len()
            )));
        }
        if let Some(i) = self.costs.iter().position(|r| r.len() != self.m) {
            return Err(Error::DimensionMismatch(format!(
                "m = {} but row {i} has {} costs",
                self.m,
                self.costs[i].len()
            )));
        }
        let weights = self.weights.unwrap_or_else(|| uniform_weights(self.n));
        let inst = Instance::new(self.costs, weights)?;
        if self.normalize {
            inst.normalized()
        } else {
            Ok(inst)
        }
    }
}

/// Parses the JSON instance format.
pub fn load_instance(bytes: &[u8]) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_slice(bytes).map_err(|e| {
        // Rational parse failures surface through serde as custom errors.
        if e.to_string().starts_with("malformed rational") {
            Error::MalformedRational(e.to_string())
        } else {
            Error::Json(e)
        }
    })?;
    doc.into_instance()
}

/// A (possibly partial) assignment of items to agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Allocation {
    pub bundles: Vec<Vec<usize>>,
    #[serde(default)]
    pub partial: bool,
}

impl Allocation {
    /// Bundles are stored sorted so equal allocations compare equal.
    pub fn new(mut bundles: Vec<Vec<usize>>) -> Self {
        for b in &mut bundles {
            b.sort_unstable();
        }
        Allocation {
            bundles,
            partial: false,
        }
    }

    pub fn partial(bundles: Vec<Vec<usize>>) -> Self {
        let mut a = Allocation::new(bundles);
        a.partial = true;
        a
    }

    pub fn empty(n: usize) -> Self {
        Allocation::new(vec![Vec::new(); n])
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent]
    }

    /// Agent holding each item, `None` for unallocated items.
    pub fn owners(&self, m: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; m];
        for (i, b) in self.bundles.iter().enumerate() {
            for &j in b {
                if j < m {
                    owner[j] = Some(i);
                }
            }
        }
        owner
    }

    /// Checks agent count, item range and disjointness; `complete`
    /// additionally requires every item to be allocated.
    pub fn validate(&self, inst: &Instance, complete: bool) -> Result<()> {
        if self.n() != inst.n() {
            return Err(Error::IncompatibleDimensions(format!(
                "{} bundles for {} agents",
                self.n(),
                inst.n()
            )));
        }
        let mut seen = BTreeSet::new();
        for (i, b) in self.bundles.iter().enumerate() {
            for &j in b {
                if j >= inst.m() {
                    return Err(Error::IncompatibleDimensions(format!(
                        "agent {i} holds item {j} but m = {}",
                        inst.m()
                    )));
                }
                if !seen.insert(j) {
                    return Err(Error::IncompatibleDimensions(format!(
                        "item {j} allocated twice"
                    )));
                }
            }
        }
        if complete && seen.len() != inst.m() {
            let missing = (0..inst.m()).find(|j| !seen.contains(j)).unwrap_or(0);
            return Err(Error::IncompatibleDimensions(format!(
                "item {missing} is unallocated"
            )));
        }
        Ok(())
    }
}

/// Per-agent sorting permutations and the identically ordered instance
/// they induce: `transformed[i][j] = costs[i][permutations[i][j]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdoWitness {
    pub permutations: Vec<Vec<usize>>,
    pub transformed: Instance,
}

pub fn is_ido(inst: &Instance) -> bool {
    first_ido_violation(inst).is_none()
}

pub(crate) fn first_ido_violation(inst: &Instance) -> Option<(usize, usize)> {
    inst.costs().iter().enumerate().find_map(|(i, row)| {
        row.windows(2)
            .position(|w| w[0] < w[1])
            .map(|j| (i, j + 1))
    })
}

pub(crate) fn require_ido(inst: &Instance) -> Result<()> {
    match first_ido_violation(inst) {
        Some((agent, item)) => Err(Error::NotIdo { agent, item }),
        None => Ok(()),
    }
}

/// Sorts each row non-increasingly; equal costs keep the smaller item first.
pub fn to_ido(inst: &Instance) -> IdoWitness {
    let mut permutations = Vec::with_capacity(inst.n());
    let mut costs = Vec::with_capacity(inst.n());
    for row in inst.costs() {
        let mut perm: Vec<usize> = (0..row.len()).collect();
        perm.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
        costs.push(perm.iter().map(|&j| row[j].clone()).collect());
        permutations.push(perm);
    }
    let transformed = Instance {
        costs,
        weights: inst.weights().to_vec(),
    };
    IdoWitness {
        permutations,
        transformed,
    }
}

/// `Σ_i c_i(X_i)` over a complete allocation.
pub fn social_cost(inst: &Instance, alloc: &Allocation) -> Result<Rational> {
    alloc.validate(inst, true)?;
    Ok(alloc
        .bundles
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (i, b)| acc + inst.bundle_cost(i, b)))
}

/// Each item to its cheapest agent (lowest index on ties).
pub fn optimal_social_cost(inst: &Instance) -> (Rational, Allocation) {
    let mut bundles = vec![Vec::new(); inst.n()];
    let mut total = Rational::zero();
    for j in 0..inst.m() {
        let best = (0..inst.n())
            .min_by(|&a, &b| inst.cost(a, j).cmp(inst.cost(b, j)).then(a.cmp(&b)))
            .expect("n >= 1");
        total += inst.cost(best, j);
        bundles[best].push(j);
    }
    (total, Allocation::new(bundles))
}
