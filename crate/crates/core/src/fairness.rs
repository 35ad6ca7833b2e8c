//! Exact fairness verifiers.
//!
//! Every check returns a [`FairnessReport`] carrying the tight ratio α each
//! agent achieves, so "holds" is simply `overall_alpha ≤ 1`. The α reported
//! for envy notions is a diagnostic (the smallest factor on the other
//! bundle's cost that would make the pairwise inequality hold); it is marked
//! [`AlphaKind::Diagnostic`] in the output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Allocation, Instance};
use crate::rational::{Alpha, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpTo {
    /// Nothing removed.
    None,
    /// Some item removed: the costliest one.
    One,
    /// Any item removed: the cheapest one.
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Notion {
    Ef,
    Ef1,
    Efx,
    Prop,
    Prop1,
    Propx,
    Wprop,
    Wprop1,
    Wpropx,
    Wef1RoundRobin,
    Mms,
    Aps,
}

impl Notion {
    pub fn envy(up_to: UpTo) -> Self {
        match up_to {
            UpTo::None => Notion::Ef,
            UpTo::One => Notion::Ef1,
            UpTo::Any => Notion::Efx,
        }
    }

    pub fn proportional(up_to: UpTo, weighted: bool) -> Self {
        match (up_to, weighted) {
            (UpTo::None, false) => Notion::Prop,
            (UpTo::One, false) => Notion::Prop1,
            (UpTo::Any, false) => Notion::Propx,
            (UpTo::None, true) => Notion::Wprop,
            (UpTo::One, true) => Notion::Wprop1,
            (UpTo::Any, true) => Notion::Wpropx,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaKind {
    /// α is the approximation factor of the notion's own definition.
    Approximation,
    /// α is a reporting aid without a standard definition (envy notions).
    Diagnostic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub notion: Notion,
    pub per_agent_alpha: Vec<Alpha>,
    pub overall_alpha: Alpha,
    pub holds: bool,
    pub alpha_kind: AlphaKind,
}

impl FairnessReport {
    pub fn from_alphas(notion: Notion, alpha_kind: AlphaKind, per_agent_alpha: Vec<Alpha>) -> Self {
        let overall_alpha = per_agent_alpha.iter().max().cloned().unwrap_or_else(Alpha::zero);
        let holds = overall_alpha.le(&Rational::from_integer(1.into()));
        FairnessReport {
            notion,
            per_agent_alpha,
            overall_alpha,
            holds,
            alpha_kind,
        }
    }

    /// True when every agent's α is finite and at most `bound`.
    pub fn within(&self, bound: &Rational) -> bool {
        self.overall_alpha.le(bound)
    }
}

/// `WPROP_i = s_i · c_i(M)`; `1/n` under uniform weights and normalized costs.
pub fn prop_share(inst: &Instance, agent: usize) -> Rational {
    inst.weight(agent) * inst.total_cost(agent)
}

/// `c_i(bundle)` minus the item designated by `up_to`.
pub fn residual_cost(inst: &Instance, agent: usize, bundle: &[usize], up_to: UpTo) -> Rational {
    let total = inst.bundle_cost(agent, bundle);
    let costs = bundle.iter().map(|&j| inst.cost(agent, j));
    let removed = match up_to {
        UpTo::None => None,
        UpTo::One => costs.max(),
        UpTo::Any => costs.min(),
    };
    match removed {
        Some(c) => total - c,
        None => total,
    }
}

/// (W)PROP, (W)PROP1 or (W)PROPX against the instance's own weights.
pub fn check_propx(inst: &Instance, alloc: &Allocation, up_to: UpTo) -> Result<FairnessReport> {
    let shares: Vec<Rational> = (0..inst.n()).map(|i| prop_share(inst, i)).collect();
    let notion = Notion::proportional(up_to, !inst.has_uniform_weights());
    check_against_shares(inst, alloc, up_to, &shares, notion)
}

/// Proportionality check against explicit per-agent thresholds.
pub fn check_against_shares(
    inst: &Instance,
    alloc: &Allocation,
    up_to: UpTo,
    shares: &[Rational],
    notion: Notion,
) -> Result<FairnessReport> {
    alloc.validate(inst, true)?;
    if shares.len() != inst.n() {
        return Err(Error::IncompatibleDimensions(format!(
            "{} shares for {} agents",
            shares.len(),
            inst.n()
        )));
    }
    let alphas = alloc
        .bundles
        .iter()
        .enumerate()
        .map(|(i, b)| Alpha::ratio(&residual_cost(inst, i, b, up_to), &shares[i]))
        .collect();
    Ok(FairnessReport::from_alphas(notion, AlphaKind::Approximation, alphas))
}

/// EF, EF1 or EFX over a complete allocation.
pub fn check_envy(inst: &Instance, alloc: &Allocation, up_to: UpTo) -> Result<FairnessReport> {
    alloc.validate(inst, true)?;
    Ok(envy_report(inst, &alloc.bundles, up_to))
}

/// Envy check that tolerates partial allocations.
pub fn check_envy_partial(inst: &Instance, alloc: &Allocation, up_to: UpTo) -> Result<FairnessReport> {
    alloc.validate(inst, false)?;
    Ok(envy_report(inst, &alloc.bundles, up_to))
}

fn envy_report(inst: &Instance, bundles: &[Vec<usize>], up_to: UpTo) -> FairnessReport {
    let n = bundles.len();
    let alphas = (0..n)
        .map(|i| {
            let residual = residual_cost(inst, i, &bundles[i], up_to);
            (0..n)
                .filter(|&j| j != i)
                .map(|j| Alpha::ratio(&residual, &inst.bundle_cost(i, &bundles[j])))
                .max()
                .unwrap_or_else(Alpha::zero)
        })
        .collect();
    FairnessReport::from_alphas(Notion::envy(up_to), AlphaKind::Diagnostic, alphas)
}

/// The weighted round-robin inequality `c_i(X_i∖{f_i})·s_j ≤ c_i(X_j)·s_i`
/// for every ordered pair of distinct agents in `group`, where `f_i` is the
/// first item agent `i` received. Agents with empty bundles impose nothing.
pub fn check_weighted_rr_inequality(
    inst: &Instance,
    alloc: &Allocation,
    first_items: &[Option<usize>],
    group: &[usize],
) -> Result<bool> {
    alloc.validate(inst, false)?;
    for &i in group {
        let bundle = alloc.bundle(i);
        if bundle.is_empty() {
            continue;
        }
        let first = match first_items.get(i).copied().flatten() {
            Some(f) if bundle.contains(&f) => f,
            Some(f) => return Err(Error::FirstItemNotInBundle { agent: i, item: f }),
            None => {
                return Err(Error::FirstItemNotInBundle {
                    agent: i,
                    item: usize::MAX,
                })
            }
        };
        let rest = inst.bundle_cost(i, bundle) - inst.cost(i, first);
        for &j in group {
            if j == i {
                continue;
            }
            let lhs = &rest * inst.weight(j);
            let rhs = inst.bundle_cost(i, alloc.bundle(j)) * inst.weight(i);
            if lhs > rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Convenience: is the allocation α-(W)PROPX for the given α?
pub fn is_alpha_propx(inst: &Instance, alloc: &Allocation, alpha: &Rational) -> Result<bool> {
    Ok(check_propx(inst, alloc, UpTo::Any)?.within(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn r1() -> Instance {
        let row = vec![frac(2, 5), frac(3, 10), frac(1, 5), frac(1, 10)];
        Instance::with_uniform_costs(vec![row.clone(), row]).unwrap()
    }

    #[test]
    fn prop_shares() {
        assert_eq!(prop_share(&r1(), 0), frac(1, 2));
        let w1 = r1().with_weights(vec![frac(1, 4), frac(3, 4)]).unwrap();
        assert_eq!(prop_share(&w1, 1), frac(3, 4));
        let raw = Instance::new(vec![vec![int(4), int(6)], vec![int(1), int(1)]], vec![frac(1, 2); 2]).unwrap();
        assert_eq!(prop_share(&raw, 0), int(5));
    }

    #[test]
    fn propx_on_balanced_split() {
        let rep = check_propx(&r1(), &Allocation::new(vec![vec![0, 3], vec![1, 2]]), UpTo::Any).unwrap();
        assert_eq!(rep.notion, Notion::Propx);
        assert_eq!(rep.per_agent_alpha, vec![Alpha::Finite(frac(4, 5)), Alpha::Finite(frac(3, 5))]);
        assert_eq!(rep.overall_alpha, Alpha::Finite(frac(4, 5)));
        assert!(rep.holds);
    }

    #[test]
    fn propx_all_items_to_one_agent() {
        let inst = Instance::with_uniform_costs(vec![vec![frac(1, 4); 4]; 4]).unwrap();
        let alloc = Allocation::new(vec![vec![0, 1, 2, 3], vec![], vec![], vec![]]);
        let rep = check_propx(&inst, &alloc, UpTo::Any).unwrap();
        assert_eq!(rep.per_agent_alpha[0], Alpha::Finite(int(3)));
        assert!(!rep.holds);
    }

    #[test]
    fn singletons_have_zero_alpha() {
        let inst = Instance::with_uniform_costs(vec![vec![frac(1, 3); 3]; 3]).unwrap();
        let alloc = Allocation::new(vec![vec![0], vec![1], vec![2]]);
        let rep = check_propx(&inst, &alloc, UpTo::Any).unwrap();
        assert_eq!(rep.overall_alpha, Alpha::zero());
        assert!(rep.holds);
    }

    #[test]
    fn zero_share_agents() {
        let inst = Instance::new(
            vec![vec![frac(1, 2), frac(1, 2)], vec![frac(1, 2), frac(1, 2)]],
            vec![int(1), int(0)],
        )
        .unwrap();
        let ok = check_propx(&inst, &Allocation::new(vec![vec![0], vec![1]]), UpTo::Any).unwrap();
        assert!(ok.holds);
        assert_eq!(ok.notion, Notion::Wpropx);
        let bad = check_propx(&inst, &Allocation::new(vec![vec![], vec![0, 1]]), UpTo::Any).unwrap();
        assert_eq!(bad.per_agent_alpha[1], Alpha::Infinite);
        assert!(!bad.holds);
    }

    #[test]
    fn efx_and_ef1() {
        let inst = r1();
        let good = Allocation::new(vec![vec![0, 3], vec![1, 2]]);
        assert!(check_envy(&inst, &good, UpTo::Any).unwrap().holds);
        let lop = Allocation::new(vec![vec![0, 1], vec![2, 3]]);
        let efx = check_envy(&inst, &lop, UpTo::Any).unwrap();
        assert!(!efx.holds);
        assert_eq!(efx.per_agent_alpha[0], Alpha::Finite(frac(4, 3)));
        assert_eq!(efx.alpha_kind, AlphaKind::Diagnostic);
        assert!(check_envy(&inst, &lop, UpTo::One).unwrap().holds);
        assert!(!check_envy(&inst, &lop, UpTo::None).unwrap().holds);
    }

    #[test]
    fn envy_against_free_bundle_is_infinite() {
        let inst = Instance::with_uniform_costs(vec![vec![frac(1, 2), frac(1, 2)]; 2]).unwrap();
        let rep = check_envy(&inst, &Allocation::new(vec![vec![0, 1], vec![]]), UpTo::Any).unwrap();
        assert_eq!(rep.per_agent_alpha[0], Alpha::Infinite);
        assert!(!rep.holds);
    }

    #[test]
    fn single_agent_is_envy_free() {
        let inst = Instance::with_uniform_costs(vec![vec![frac(1, 2), frac(1, 2)]]).unwrap();
        let alloc = Allocation::new(vec![vec![0, 1]]);
        for up_to in [UpTo::None, UpTo::One, UpTo::Any] {
            assert!(check_envy(&inst, &alloc, up_to).unwrap().holds);
        }
    }

    #[test]
    fn weighted_rr_inequality_cases() {
        let inst = Instance::with_uniform_costs(vec![vec![frac(1, 2), frac(1, 2)]; 2]).unwrap();
        let alloc = Allocation::new(vec![vec![0], vec![1]]);
        assert!(check_weighted_rr_inequality(&inst, &alloc, &[Some(0), Some(1)], &[0, 1]).unwrap());
        assert!(matches!(
            check_weighted_rr_inequality(&inst, &alloc, &[Some(1), Some(1)], &[0, 1]),
            Err(Error::FirstItemNotInBundle { agent: 0, item: 1 })
        ));

        let row = vec![frac(1, 4), frac(1, 5), frac(3, 20), frac(3, 20), frac(3, 20), frac(1, 10)];
        let inst = Instance::new(vec![row; 4], vec![frac(1, 10), frac(1, 5), frac(3, 10), frac(2, 5)]).unwrap();
        let alloc = Allocation::new(vec![vec![0], vec![1], vec![2, 5], vec![3, 4]]);
        let first = [Some(0), Some(1), Some(2), Some(3)];
        assert!(check_weighted_rr_inequality(&inst, &alloc, &first, &[2, 3]).unwrap());
    }

    #[test]
    fn incompatible_allocation_is_rejected() {
        let partial = Allocation::partial(vec![vec![0], vec![1]]);
        assert!(matches!(check_propx(&r1(), &partial, UpTo::Any), Err(Error::IncompatibleDimensions(_))));
    }
}
