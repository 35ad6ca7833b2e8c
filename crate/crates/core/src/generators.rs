//! Deterministic instance families and seeded random instances.
//!
//! Families are emitted with the costs of their defining tables, which may
//! not be row-normalized; the `normalize` flag travels with the serialized
//! document and is applied at load time.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{uniform_weights, Instance, InstanceDoc};
use crate::rational::{self, frac, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Random,
    MmsBadPropx,
    MmsTight43,
    PofUnweighted,
    PofWeighted,
    PofWeightedIdo,
    OrdinalLb,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Random,
        Family::MmsBadPropx,
        Family::MmsTight43,
        Family::PofUnweighted,
        Family::PofWeighted,
        Family::PofWeightedIdo,
        Family::OrdinalLb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::MmsBadPropx => "mms_bad_propx",
            Family::MmsTight43 => "mms_tight_43",
            Family::PofUnweighted => "pof_unweighted",
            Family::PofWeighted => "pof_weighted",
            Family::PofWeightedIdo => "pof_weighted_ido",
            Family::OrdinalLb => "ordinal_lb",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::InvalidParams(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    #[default]
    Uniform,
    /// Random positive integers in `[1, 1000]`, normalized to sum 1.
    Random,
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(WeightMode::Uniform),
            "random" => Ok(WeightMode::Random),
            _ => Err(Error::InvalidParams(format!("unknown weight mode {s:?}"))),
        }
    }
}

/// Parameters of one generated instance. Unused fields are ignored by the
/// families that do not need them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub m: Option<usize>,
    #[serde(with = "rational::text_opt", default)]
    pub eps: Option<Rational>,
    pub seed: u64,
    pub weight_mode: WeightMode,
    pub normalize: bool,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize) -> Self {
        FamilySpec {
            family,
            n,
            m: None,
            eps: None,
            seed: 0,
            weight_mode: WeightMode::Uniform,
            normalize: false,
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_eps(mut self, eps: Rational) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Compact `key=value` rendering of the parameters that matter for the
    /// family, used as an experiment id.
    pub fn params(&self) -> String {
        match self.family {
            Family::Random => format!("n={};m={};seed={}", self.n, self.m.unwrap_or(0), self.seed),
            Family::MmsBadPropx | Family::PofUnweighted => format!("n={}", self.n),
            Family::MmsTight43 => format!("n={};eps={}", self.n, rational::format(&tight_eps(self))),
            Family::PofWeighted => format!("eps={}", rational::format(&self.eps.clone().unwrap_or_else(|| frac(1, 10)))),
            Family::PofWeightedIdo | Family::OrdinalLb => format!("m={}", self.m.unwrap_or(0)),
        }
    }

    /// What the generated instance looks like.
    pub fn note(&self) -> String {
        match self.family {
            Family::Random => "uniform random integer costs in [0, 1000], row-normalized".into(),
            Family::MmsBadPropx => {
                "identical agents; one item of cost n-1 and n-1 unit items; an MMS allocation far from PROPX".into()
            }
            Family::MmsTight43 => {
                "identical agents; 2n+1 items in three descending runs; envy-cycle output is far from MMS".into()
            }
            Family::PofUnweighted => {
                "agent 0 finds the first n-1 items cheap and the last one expensive; others are flat".into()
            }
            Family::PofWeighted => "two agents with shares (1-eps^2, eps^2) and crossing costs on three items".into(),
            Family::PofWeightedIdo => "two IDO agents with shares (1-1/m^2, 1/m^2)".into(),
            Family::OrdinalLb => "two agents, m items, flat completion of a fixed ordinal ranking".into(),
        }
    }
}

fn tight_eps(spec: &FamilySpec) -> Rational {
    spec.eps.clone().unwrap_or_else(|| frac(1, 6 * (spec.n.max(2) as i64 - 1)))
}

fn require_m(spec: &FamilySpec, min: usize) -> Result<usize> {
    match spec.m {
        Some(m) if m >= min => Ok(m),
        Some(m) => Err(Error::InvalidParams(format!("{} needs m >= {min}, got {m}", spec.family))),
        None => Err(Error::InvalidParams(format!("{} needs m", spec.family))),
    }
}

/// Builds the instance described by `spec`.
pub fn gen(spec: &FamilySpec) -> Result<Instance> {
    let n = spec.n;
    match spec.family {
        Family::Random => {
            if n == 0 {
                return Err(Error::InvalidParams("random needs n >= 1".into()));
            }
            Ok(gen_random(n, spec.m.unwrap_or(0), spec.seed, spec.weight_mode))
        }
        Family::MmsBadPropx => {
            if n < 2 {
                return Err(Error::InvalidParams("mms_bad_propx needs n >= 2".into()));
            }
            let mut row = vec![int(1); n];
            row[0] = int(n as i64 - 1);
            Instance::with_uniform_costs(vec![row; n])
        }
        Family::MmsTight43 => {
            if n < 2 {
                return Err(Error::InvalidParams("mms_tight_43 needs n >= 2".into()));
            }
            let eps = tight_eps(spec);
            if eps <= Rational::zero() {
                return Err(Error::InvalidParams("mms_tight_43 needs eps > 0".into()));
            }
            let mut row = Vec::with_capacity(2 * n + 1);
            for base in [frac(2, 3), frac(1, 2)] {
                for j in 0..n {
                    row.push(&base - &eps * int(j as i64));
                }
            }
            row.push(frac(1, 3));
            if row.iter().any(|c| *c < Rational::zero()) {
                return Err(Error::InvalidParams("mms_tight_43: eps too large for n".into()));
            }
            Instance::with_uniform_costs(vec![row; n])
        }
        Family::PofUnweighted => {
            if n < 2 {
                return Err(Error::InvalidParams("pof_unweighted needs n >= 2".into()));
            }
            let nn = (n * n) as i64;
            let mut first = vec![frac(2, nn); n - 1];
            first.push(Rational::one() - frac(2 * (n as i64 - 1), nn));
            let mut costs = vec![first];
            costs.extend(std::iter::repeat(vec![frac(1, n as i64); n]).take(n - 1));
            Instance::with_uniform_costs(costs)
        }
        Family::PofWeighted => {
            let eps = spec.eps.clone().unwrap_or_else(|| frac(1, 10));
            if eps <= Rational::zero() || eps >= frac(1, 2) {
                return Err(Error::InvalidParams("pof_weighted needs 0 < eps < 1/2".into()));
            }
            let costs = vec![
                vec![frac(1, 2), frac(1, 2), int(0)],
                vec![eps.clone(), eps.clone(), Rational::one() - &eps * int(2)],
            ];
            let tiny = &eps * &eps;
            Instance::new(costs, vec![Rational::one() - &tiny, tiny])
        }
        Family::PofWeightedIdo => {
            let m = require_m(spec, 2)?;
            let mut first = vec![int(0); m];
            first[0] = frac(1, 2);
            first[1] = frac(1, 2);
            let tiny = frac(1, (m * m) as i64);
            Instance::new(vec![first, vec![frac(1, m as i64); m]], vec![Rational::one() - &tiny, tiny])
        }
        Family::OrdinalLb => {
            let m = require_m(spec, 1)?;
            let [_, flat] = ordinal_lb_completions(m);
            Ok(flat)
        }
    }
}

/// Serializable form of [`gen`], carrying the spec's normalize flag.
pub fn gen_doc(spec: &FamilySpec) -> Result<InstanceDoc> {
    Ok(gen(spec)?.to_doc(spec.normalize))
}

/// The two cardinal completions of the 2-agent ordinal ranking on `m` items:
/// a single item carries all the cost, or all items cost `1/m`.
pub fn ordinal_lb_completions(m: usize) -> [Instance; 2] {
    let mut spike = vec![int(0); m];
    if m > 0 {
        spike[0] = int(1);
    }
    let flat = vec![frac(1, m.max(1) as i64); m];
    [
        Instance::with_uniform_costs(vec![spike.clone(), spike]).expect("valid spike completion"),
        Instance::with_uniform_costs(vec![flat.clone(), flat]).expect("valid flat completion"),
    ]
}

/// Random integer costs in `[0, 1000]` normalized per row. A row drawn as
/// all zeros is redrawn so that normalization is defined.
pub fn gen_random(n: usize, m: usize, seed: u64, weight_mode: WeightMode) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let costs = (0..n)
        .map(|_| loop {
            let raw: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=1000)).collect();
            let total: u64 = raw.iter().sum();
            if m == 0 {
                break Vec::new();
            }
            if total > 0 {
                break raw.into_iter().map(|c| frac(c as i64, total as i64)).collect::<Vec<_>>();
            }
        })
        .collect();
    let weights = match weight_mode {
        WeightMode::Uniform => uniform_weights(n),
        WeightMode::Random => {
            let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=1000)).collect();
            let total: i64 = raw.iter().sum();
            raw.into_iter().map(|w| frac(w, total)).collect()
        }
    };
    Instance::new(costs, weights).expect("generated instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::is_ido;

    #[test]
    fn bad_propx_rows() {
        let inst = gen(&FamilySpec::new(Family::MmsBadPropx, 4)).unwrap();
        assert_eq!(inst.costs(), vec![vec![int(3), int(1), int(1), int(1)]; 4].as_slice());
    }

    #[test]
    fn tight_43_rows() {
        let inst = gen(&FamilySpec::new(Family::MmsTight43, 3)).unwrap();
        let expect = vec![
            frac(2, 3),
            frac(7, 12),
            frac(1, 2),
            frac(1, 2),
            frac(5, 12),
            frac(1, 3),
            frac(1, 3),
        ];
        assert_eq!(inst.costs(), vec![expect; 3].as_slice());
        assert!(is_ido(&inst));
    }

    #[test]
    fn pof_unweighted_rows() {
        let inst = gen(&FamilySpec::new(Family::PofUnweighted, 4)).unwrap();
        assert_eq!(inst.row(0), &[frac(2, 16), frac(2, 16), frac(2, 16), frac(10, 16)]);
        for i in 1..4 {
            assert_eq!(inst.row(i), vec![frac(1, 4); 4].as_slice());
        }
        assert!(inst.is_normalized());
    }

    #[test]
    fn weighted_families() {
        let w = gen(&FamilySpec::new(Family::PofWeighted, 2).with_eps(frac(1, 10))).unwrap();
        assert_eq!(w.weights(), &[frac(99, 100), frac(1, 100)]);
        assert_eq!(w.row(1), &[frac(1, 10), frac(1, 10), frac(4, 5)]);
        assert!(gen(&FamilySpec::new(Family::PofWeighted, 2).with_eps(frac(1, 2))).is_err());

        let ido = gen(&FamilySpec::new(Family::PofWeightedIdo, 2).with_m(8)).unwrap();
        assert_eq!(ido.weights(), &[frac(63, 64), frac(1, 64)]);
        assert!(is_ido(&ido) && ido.is_normalized());
        assert!(gen(&FamilySpec::new(Family::PofWeightedIdo, 2)).is_err());
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(
            gen(&FamilySpec::new(Family::MmsTight43, 1)),
            Err(Error::InvalidParams(_))
        ));
        assert!(gen(&FamilySpec::new(Family::OrdinalLb, 2)).is_err());
    }

    #[test]
    fn random_is_reproducible_and_normalized() {
        let a = gen_random(3, 8, 42, WeightMode::Random);
        let b = gen_random(3, 8, 42, WeightMode::Random);
        assert_eq!(a, b);
        assert!(a.is_normalized());
        assert_eq!(rational::sum(a.weights()), int(1));
        let empty = gen_random(2, 0, 7, WeightMode::Uniform);
        assert_eq!(empty.m(), 0);
        assert_ne!(gen_random(3, 8, 43, WeightMode::Uniform), gen_random(3, 8, 42, WeightMode::Uniform));
    }

    #[test]
    fn family_names_parse() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("mms-tight-43".parse::<Family>().unwrap(), Family::MmsTight43);
    }
}
