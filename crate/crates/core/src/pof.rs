//! Price of fairness: social cost of an algorithm's output against the
//! optimum, and the exact cheapest (W)PROPX allocation by enumeration.

use std::io::Write;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{solve_general, Algorithm};
use crate::error::{Error, Result};
use crate::fairness::{check_against_shares, prop_share, Notion, UpTo};
use crate::generators::{gen, FamilySpec};
use crate::instance::{optimal_social_cost, social_cost, Allocation, Instance};
use crate::rational::{self, Rational};

/// Largest `n^m` the fair-allocation enumeration accepts by default.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub family: String,
    pub params: String,
    pub n: usize,
    pub m: usize,
    pub algo: Algorithm,
    #[serde(with = "rational::text")]
    pub social_cost: Rational,
    #[serde(with = "rational::text")]
    pub opt: Rational,
    #[serde(with = "rational::text")]
    pub ratio: Rational,
    #[serde(with = "rational::text_opt", default)]
    pub certified_min_fair_cost: Option<Rational>,
}

/// `sc(X) / opt` for the algorithm's output through the general reduction.
///
/// For bid-and-take this also checks that the output costs at most one
/// unit when each agent's cost is measured as a fraction of `c_i(M)`.
pub fn pof_ratio(inst: &Instance, algo: Algorithm) -> Result<ExperimentRecord> {
    let (opt, _) = optimal_social_cost(inst);
    if opt.is_zero() {
        return Err(Error::ZeroOpt);
    }
    let alloc = solve_general(inst, algo)?;
    let sc = social_cost(inst, &alloc)?;
    if algo == Algorithm::BidAndTake {
        let scaled = normalized_social_cost(inst, &alloc);
        if scaled > Rational::one() {
            return Err(Error::InvariantViolation(format!(
                "bid-and-take normalized social cost {scaled} exceeds 1"
            )));
        }
    }
    Ok(ExperimentRecord {
        family: String::new(),
        params: String::new(),
        n: inst.n(),
        m: inst.m(),
        algo,
        ratio: &sc / &opt,
        social_cost: sc,
        opt,
        certified_min_fair_cost: None,
    })
}

/// `Σ_i c_i(X_i) / c_i(M)`, skipping agents whose every item is free.
pub fn normalized_social_cost(inst: &Instance, alloc: &Allocation) -> Rational {
    (0..inst.n())
        .filter_map(|i| {
            let total = inst.total_cost(i);
            (!total.is_zero()).then(|| inst.bundle_cost(i, alloc.bundle(i)) / total)
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// Cheapest social cost over all complete allocations that are PROPX
/// (uniform shares) or WPROPX (instance shares).
pub fn min_fair_social_cost(inst: &Instance, notion: Notion) -> Result<(Rational, Allocation)> {
    min_fair_social_cost_with(inst, notion, DEFAULT_ENUMERATION_BUDGET)
}

pub fn min_fair_social_cost_with(inst: &Instance, notion: Notion, budget: u64) -> Result<(Rational, Allocation)> {
    let fair_inst = match notion {
        Notion::Propx => inst.with_uniform_weights(),
        Notion::Wpropx => inst.clone(),
        other => return Err(Error::InvalidParams(format!("cannot minimize over {other:?} allocations"))),
    };
    let space = (inst.n() as u64).checked_pow(inst.m() as u32);
    if space.map_or(true, |s| s > budget) {
        return Err(Error::BudgetExceeded {
            what: format!("enumerating {}^{} allocations", inst.n(), inst.m()),
            budget,
        });
    }

    // A WPROPX allocation always exists; bid-and-take supplies the first incumbent.
    let seed = solve_general(&fair_inst, Algorithm::BidAndTake)?;
    let seed_cost = social_cost(inst, &seed)?;
    let shares: Vec<Rational> = (0..inst.n()).map(|i| prop_share(&fair_inst, i)).collect();

    let mut search = FairSearch::new(inst, &shares);
    search.best = seed_cost;
    search.best_owner = seed.owners(inst.m()).into_iter().map(|o| o.expect("complete")).collect();
    search.descend(0, Rational::zero());

    let mut bundles = vec![Vec::new(); inst.n()];
    for (item, &agent) in search.best_owner.iter().enumerate() {
        bundles[agent].push(item);
    }
    let alloc = Allocation::new(bundles);
    let report = check_against_shares(inst, &alloc, UpTo::Any, &shares, notion)?;
    if !report.holds {
        return Err(Error::InvariantViolation("enumeration returned an unfair allocation".into()));
    }
    Ok((search.best, alloc))
}

struct FairSearch<'a> {
    inst: &'a Instance,
    shares: &'a [Rational],
    /// Agents per item, cheapest first.
    order: Vec<Vec<usize>>,
    /// `suffix_min[j]`: sum over items `j..` of the cheapest agent's cost.
    suffix_min: Vec<Rational>,
    load: Vec<Rational>,
    min_item: Vec<Option<Rational>>,
    owner: Vec<usize>,
    best: Rational,
    best_owner: Vec<usize>,
}

impl<'a> FairSearch<'a> {
    fn new(inst: &'a Instance, shares: &'a [Rational]) -> Self {
        let (n, m) = (inst.n(), inst.m());
        let order = (0..m)
            .map(|j| {
                let mut agents: Vec<usize> = (0..n).collect();
                agents.sort_by(|&a, &b| inst.cost(a, j).cmp(inst.cost(b, j)).then(a.cmp(&b)));
                agents
            })
            .collect::<Vec<_>>();
        let mut suffix_min = vec![Rational::zero(); m + 1];
        for j in (0..m).rev() {
            suffix_min[j] = &suffix_min[j + 1] + inst.cost(order[j][0], j);
        }
        FairSearch {
            inst,
            shares,
            order,
            suffix_min,
            load: vec![Rational::zero(); n],
            min_item: vec![None; n],
            owner: vec![0; m],
            best: Rational::zero(),
            best_owner: Vec::new(),
        }
    }

    fn descend(&mut self, item: usize, sc: Rational) {
        if &sc + &self.suffix_min[item] >= self.best {
            return;
        }
        if item == self.inst.m() {
            self.best = sc;
            self.best_owner = self.owner.clone();
            return;
        }
        for k in 0..self.inst.n() {
            let agent = self.order[item][k];
            let c = self.inst.cost(agent, item).clone();
            let new_load = &self.load[agent] + &c;
            let new_min = match &self.min_item[agent] {
                Some(prev) if *prev <= c => prev.clone(),
                _ => c.clone(),
            };
            // Residual after dropping the cheapest item never decreases as items are added.
            if &new_load - &new_min > self.shares[agent] {
                continue;
            }
            let saved_load = std::mem::replace(&mut self.load[agent], new_load);
            let saved_min = self.min_item[agent].replace(new_min);
            self.owner[item] = agent;
            self.descend(item + 1, &sc + &c);
            self.load[agent] = saved_load;
            self.min_item[agent] = saved_min;
        }
    }
}

/// Runs every spec in parallel; records come back in input order.
pub fn run_sweep(specs: &[FamilySpec], algo: Algorithm, certify: bool) -> Result<Vec<ExperimentRecord>> {
    specs
        .par_iter()
        .map(|spec| {
            let raw = gen(spec)?;
            let inst = if spec.normalize { raw.normalized()? } else { raw };
            let mut rec = pof_ratio(&inst, algo)?;
            rec.family = spec.family.to_string();
            rec.params = spec.params();
            if certify {
                let notion = if inst.has_uniform_weights() { Notion::Propx } else { Notion::Wpropx };
                rec.certified_min_fair_cost = Some(min_fair_social_cost(&inst, notion)?.0);
            }
            Ok(rec)
        })
        .collect()
}

#[derive(Serialize)]
struct CsvRow<'a> {
    family: &'a str,
    params: &'a str,
    n: usize,
    m: usize,
    algo: &'a str,
    sc: String,
    opt: String,
    ratio: String,
    fair_min: String,
    ratio_float: f64,
}

/// Writes records as CSV; an empty slice still produces the header.
pub fn write_csv<W: Write>(out: W, records: &[ExperimentRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record([
        "family",
        "params",
        "n",
        "m",
        "algo",
        "sc",
        "opt",
        "ratio",
        "fair_min",
        "ratio_float",
    ])?;
    for r in records {
        w.serialize(CsvRow {
            family: &r.family,
            params: &r.params,
            n: r.n,
            m: r.m,
            algo: r.algo.name(),
            sc: rational::format(&r.social_cost),
            opt: rational::format(&r.opt),
            ratio: rational::format(&r.ratio),
            fair_min: r.certified_min_fair_cost.as_ref().map(rational::format).unwrap_or_default(),
            ratio_float: rational::to_f64(&r.ratio),
        })?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
