//! Share oracles: exact MMS and APS values plus their closed-form lower
//! bounds, and α-certification of allocations against them.
//!
//! Exact oracles are exponential and guarded by [`OracleConfig`]; exceeding
//! a guard is a hard [`Error::BudgetExceeded`], never a silent approximation.

mod aps;
pub mod lp;
mod mms;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use aps::{cheapest_repaying_set, exact_aps};
pub use mms::exact_mms;

use crate::error::{Error, Result};
use crate::fairness::{AlphaKind, FairnessReport, Notion};
use crate::instance::Instance;
use crate::rational::{self, Alpha, Rational};

pub const DEFAULT_MMS_NODE_BUDGET: u64 = 10_000_000;
pub const DEFAULT_APS_MAX_ITEMS: usize = 14;
pub const BUDGET_ENV: &str = "CHORESOLVER_BUDGET";

/// Cooperative cancellation flag shared with a running search.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Search nodes the MMS branch and bound may visit.
    pub mms_node_budget: u64,
    /// Largest item count for the APS subset enumeration.
    pub aps_max_items: usize,
    pub cancel: Option<CancelToken>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            mms_node_budget: DEFAULT_MMS_NODE_BUDGET,
            aps_max_items: DEFAULT_APS_MAX_ITEMS,
            cancel: None,
        }
    }
}

impl OracleConfig {
    /// Defaults, with the MMS budget overridden by `CHORESOLVER_BUDGET`.
    pub fn from_env() -> Self {
        let mut cfg = OracleConfig::default();
        if let Some(b) = std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            cfg.mms_node_budget = b;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OracleNotion {
    Mms,
    Aps,
    MmsLb,
    ApsLb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// An `n`-partition whose largest bundle attains the value.
    Partition { bundles: Vec<Vec<usize>> },
    /// A reward vector under which every repaying set costs at least the value.
    Rewards {
        #[serde(with = "rational::text_vec")]
        rewards: Vec<Rational>,
    },
}

/// Proof that the next candidate threshold above an APS value is not
/// attainable: cheap sets (each costing less than `threshold`) with weights
/// covering every item at least once and summing to at most `1/s_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    #[serde(with = "rational::text")]
    pub threshold: Rational,
    pub sets: Vec<Vec<usize>>,
    #[serde(with = "rational::text_vec")]
    pub weights: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleValue {
    pub agent: usize,
    pub notion: OracleNotion,
    #[serde(with = "rational::text")]
    pub value: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverCertificate>,
}

fn max_item(inst: &Instance, agent: usize) -> Rational {
    inst.row(agent).iter().max().cloned().unwrap_or_default()
}

/// `max(max_j c_ij, c_i(M)/n)`.
pub fn mms_lower_bound(inst: &Instance, agent: usize) -> Rational {
    let prop = inst.total_cost(agent) / Rational::from_integer((inst.n() as i64).into());
    max_item(inst, agent).max(prop)
}

/// `max(s_i · c_i(M), max_j c_ij)`; the share term is `s_i` on normalized rows.
pub fn aps_lower_bound(inst: &Instance, agent: usize) -> Rational {
    let share = inst.weight(agent) * inst.total_cost(agent);
    max_item(inst, agent).max(share)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShareNotion {
    Mms,
    Aps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifyMode {
    Exact,
    /// Uses the closed-form lower bounds; the α it reports is an upper
    /// bound on the true α.
    LowerBound,
}

pub fn share_value(
    inst: &Instance,
    agent: usize,
    notion: ShareNotion,
    mode: CertifyMode,
    cfg: &OracleConfig,
) -> Result<Rational> {
    Ok(match (notion, mode) {
        (ShareNotion::Mms, CertifyMode::Exact) => exact_mms(inst, agent, cfg)?.value,
        (ShareNotion::Aps, CertifyMode::Exact) => exact_aps(inst, agent, cfg)?.value,
        (ShareNotion::Mms, CertifyMode::LowerBound) => mms_lower_bound(inst, agent),
        (ShareNotion::Aps, CertifyMode::LowerBound) => aps_lower_bound(inst, agent),
    })
}

/// Per-agent `α_i = c_i(X_i) / share_i`; a zero share with a positive
/// bundle cost yields the infinite marker.
pub fn certify_alpha(
    inst: &Instance,
    alloc: &crate::instance::Allocation,
    notion: ShareNotion,
    mode: CertifyMode,
    cfg: &OracleConfig,
) -> Result<FairnessReport> {
    alloc.validate(inst, true)?;
    let alphas = (0..inst.n())
        .map(|i| {
            let share = share_value(inst, i, notion, mode, cfg)?;
            Ok(Alpha::ratio(&inst.bundle_cost(i, alloc.bundle(i)), &share))
        })
        .collect::<Result<Vec<_>>>()?;
    let notion = match notion {
        ShareNotion::Mms => Notion::Mms,
        ShareNotion::Aps => Notion::Aps,
    };
    Ok(FairnessReport::from_alphas(notion, AlphaKind::Approximation, alphas))
}

pub fn lower_bound_value(inst: &Instance, agent: usize, notion: ShareNotion) -> OracleValue {
    let (value, notion) = match notion {
        ShareNotion::Mms => (mms_lower_bound(inst, agent), OracleNotion::MmsLb),
        ShareNotion::Aps => (aps_lower_bound(inst, agent), OracleNotion::ApsLb),
    };
    OracleValue {
        agent,
        notion,
        value,
        witness: None,
        cover: None,
    }
}

/// Re-evaluates a partition witness: the largest bundle cost under `agent`.
pub fn partition_value(inst: &Instance, agent: usize, bundles: &[Vec<usize>]) -> Result<Rational> {
    if bundles.len() != inst.n() {
        return Err(Error::IncompatibleDimensions("witness bundle count".into()));
    }
    Ok(bundles
        .iter()
        .map(|b| inst.bundle_cost(agent, b))
        .max()
        .unwrap_or_default())
}
