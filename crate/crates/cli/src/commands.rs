use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use choresolver::algorithms::{solve_general_with, AgentPartition, SolveOptions};
use choresolver::fairness::{check_against_shares, check_envy, prop_share};
use choresolver::generators::{gen_doc, FamilySpec};
use choresolver::oracles::{
    certify_alpha, exact_aps, exact_mms, lower_bound_value, CertifyMode, OracleConfig, OracleValue, ShareNotion,
};
use choresolver::pof::{run_sweep, write_csv, ExperimentRecord};
use choresolver::rational::{self, Rational};
use choresolver::{load_instance, Allocation, FairnessReport, Instance, Notion, UpTo};

use crate::{
    Compute, Criterion, Failure, GenArgs, OracleArgs, PofArgs, ShareMode, SolveArgs, VerifyArgs, EXIT_OK,
    EXIT_VERIFY_FAILED,
};

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        Ok(fs::read(path)?)
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    Ok(load_instance(&read_bytes(path)?)?)
}

/// Writes `doc` as pretty JSON to `out` when given, else to stdout.
pub(crate) fn emit<T: Serialize>(doc: &T, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub(crate) fn parse_rational(s: &str, flag: &str) -> Result<Rational, Failure> {
    rational::parse(s).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
}

/// `lo..hi` (inclusive) or a single value.
pub(crate) fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("bad range {s:?}; expected lo..hi"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok((
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?,
        )),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

#[derive(Serialize)]
struct SolveDoc<'a> {
    algorithm: &'a str,
    n: usize,
    m: usize,
    bundles: &'a [Vec<usize>],
    #[serde(with = "rational::text")]
    social_cost: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<&'a AgentPartition>,
}

pub(crate) fn solve(a: &SolveArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let inst = load(&a.input)?;
    let opts = SolveOptions {
        assert_invariants: a.assert_invariants,
    };
    let out = solve_general_with(&inst, a.alg, opts)?;
    if let Some(path) = &a.trace {
        let mut text = serde_json::to_string_pretty(&out.trace)?;
        text.push('\n');
        fs::write(path, text)?;
    }
    let social_cost = choresolver::instance::social_cost(&inst, &out.allocation)?;
    let doc = SolveDoc {
        algorithm: a.alg.name(),
        n: inst.n(),
        m: inst.m(),
        bundles: &out.allocation.bundles,
        social_cost,
        partition: out.partition.as_ref(),
    };
    emit(&doc, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

/// Accepts any JSON object with a `bundles` field.
#[derive(Deserialize)]
struct AllocInput {
    bundles: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct CriterionResult {
    criterion: Criterion,
    passes: bool,
    report: FairnessReport,
}

#[derive(Serialize)]
struct VerifyDoc {
    #[serde(with = "rational::text")]
    alpha: Rational,
    all_pass: bool,
    criteria: Vec<CriterionResult>,
}

pub(crate) fn oracle_config(budget: Option<u64>) -> OracleConfig {
    let mut cfg = OracleConfig::from_env();
    if let Some(b) = budget {
        cfg.mms_node_budget = b;
    }
    cfg
}

pub(crate) fn evaluate(
    inst: &Instance,
    alloc: &Allocation,
    criterion: Criterion,
    shares: ShareMode,
    cfg: &OracleConfig,
) -> Result<FairnessReport, Failure> {
    let uniform: Vec<Rational> = {
        let flat = inst.with_uniform_weights();
        (0..inst.n()).map(|i| prop_share(&flat, i)).collect()
    };
    let weighted: Vec<Rational> = (0..inst.n()).map(|i| prop_share(inst, i)).collect();
    let mode = match shares {
        ShareMode::Exact => CertifyMode::Exact,
        ShareMode::LowerBound => CertifyMode::LowerBound,
    };
    let report = match criterion {
        Criterion::Prop => check_against_shares(inst, alloc, UpTo::None, &uniform, Notion::Prop)?,
        Criterion::Prop1 => check_against_shares(inst, alloc, UpTo::One, &uniform, Notion::Prop1)?,
        Criterion::Propx => check_against_shares(inst, alloc, UpTo::Any, &uniform, Notion::Propx)?,
        Criterion::Wprop => check_against_shares(inst, alloc, UpTo::None, &weighted, Notion::Wprop)?,
        Criterion::Wprop1 => check_against_shares(inst, alloc, UpTo::One, &weighted, Notion::Wprop1)?,
        Criterion::Wpropx => check_against_shares(inst, alloc, UpTo::Any, &weighted, Notion::Wpropx)?,
        Criterion::Ef => check_envy(inst, alloc, UpTo::None)?,
        Criterion::Ef1 => check_envy(inst, alloc, UpTo::One)?,
        Criterion::Efx => check_envy(inst, alloc, UpTo::Any)?,
        Criterion::Mms => certify_alpha(inst, alloc, ShareNotion::Mms, mode, cfg)?,
        Criterion::Aps => certify_alpha(inst, alloc, ShareNotion::Aps, mode, cfg)?,
    };
    Ok(report)
}

pub(crate) fn verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let alpha = parse_rational(&a.alpha, "alpha")?;
    let inst = load(&a.input)?;
    let alloc: AllocInput = serde_json::from_slice(&read_bytes(&a.alloc)?)?;
    let alloc = Allocation::new(alloc.bundles);
    let cfg = oracle_config(a.budget);
    let mut criteria = Vec::with_capacity(a.criteria.len());
    for &criterion in &a.criteria {
        let report = evaluate(&inst, &alloc, criterion, a.shares, &cfg)?;
        criteria.push(CriterionResult {
            criterion,
            passes: report.within(&alpha),
            report,
        });
    }
    let all_pass = criteria.iter().all(|c| c.passes);
    emit(
        &VerifyDoc {
            alpha,
            all_pass,
            criteria,
        },
        a.out.as_deref(),
        stdout,
    )?;
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[derive(Serialize)]
struct OracleDoc {
    values: Vec<OracleValue>,
}

pub(crate) fn oracle(a: &OracleArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let inst = load(&a.input)?;
    let agents: Vec<usize> = if a.agent == "all" {
        (0..inst.n()).collect()
    } else {
        let k: usize = a
            .agent
            .parse()
            .map_err(|_| Failure::Usage(format!("--agent: expected `all` or an index, got {:?}", a.agent)))?;
        if k >= inst.n() {
            return Err(Failure::Usage(format!("--agent {k} out of range for n = {}", inst.n())));
        }
        vec![k]
    };
    let mut cfg = oracle_config(a.budget);
    if let Some(limit) = a.aps_max_items {
        cfg.aps_max_items = limit;
    }
    let mut values = Vec::new();
    for i in agents {
        match a.compute {
            Compute::Mms => values.push(exact_mms(&inst, i, &cfg)?),
            Compute::Aps => values.push(exact_aps(&inst, i, &cfg)?),
            Compute::Both => {
                values.push(exact_mms(&inst, i, &cfg)?);
                values.push(exact_aps(&inst, i, &cfg)?);
            }
            Compute::MmsLb => values.push(lower_bound_value(&inst, i, ShareNotion::Mms)),
            Compute::ApsLb => values.push(lower_bound_value(&inst, i, ShareNotion::Aps)),
        }
    }
    emit(&OracleDoc { values }, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

pub(crate) fn gen(a: &GenArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let spec = FamilySpec {
        family: a.family,
        n: a.n,
        m: a.m,
        eps: a.eps.as_deref().map(|e| parse_rational(e, "eps")).transpose()?,
        seed: a.seed,
        weight_mode: a.weights,
        normalize: a.normalize,
    };
    let doc = gen_doc(&spec)?;
    writeln!(stderr, "family {}: {}", spec.family, spec.note())?;
    emit(&doc, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PofDoc<'a> {
    records: &'a [ExperimentRecord],
}

pub(crate) fn pof(a: &PofArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let (key, range) = a
        .range
        .split_once('=')
        .ok_or_else(|| Failure::Usage(format!("--range {:?}: expected n=lo..hi or m=lo..hi", a.range)))?;
    let (lo, hi) = parse_range(range)?;
    let eps = a.eps.as_deref().map(|e| parse_rational(e, "eps")).transpose()?;
    let specs: Vec<FamilySpec> = (lo..=hi)
        .map(|v| {
            let mut spec = match key.trim() {
                "n" => FamilySpec::new(a.family, v),
                "m" => FamilySpec::new(a.family, a.n.unwrap_or(2)).with_m(v),
                other => return Err(Failure::Usage(format!("--range: unknown parameter {other:?}"))),
            };
            spec.eps = eps.clone();
            Ok(spec)
        })
        .collect::<Result<_, _>>()?;
    let records = run_sweep(&specs, a.alg, a.certify)?;
    match &a.out {
        Some(path) => {
            write_csv(fs::File::create(path)?, &records)?;
            emit(&PofDoc { records: &records }, None, stdout)?;
        }
        None => write_csv(stdout, &records)?,
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..6").unwrap(), (2, 6));
        assert_eq!(parse_range("2..=6").unwrap(), (2, 6));
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert!(parse_range("a..b").is_err());
    }
}
