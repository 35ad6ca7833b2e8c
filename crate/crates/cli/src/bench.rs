//! Seeded sweep timing every algorithm on random instances.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use choresolver::fairness::{check_propx, UpTo};
use choresolver::generators::{gen_random, WeightMode};
use choresolver::instance::{optimal_social_cost, social_cost};
use choresolver::rational::{self, Alpha};
use choresolver::{solve_general, Algorithm, Result};

use crate::commands::{emit, parse_range};
use crate::{BenchArgs, Failure, EXIT_OK};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub n: (usize, usize),
    pub m: (usize, usize),
    pub seeds: u64,
    pub first_seed: u64,
    pub weights: WeightMode,
}

/// One algorithm run. `alpha` is the instance-weighted PROPX ratio; `ratio`
/// is social cost over the optimum (empty when the optimum is zero).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub algo: &'static str,
    pub alpha: String,
    pub sc: String,
    pub opt: String,
    pub ratio: String,
    pub ratio_float: Option<f64>,
    pub micros: u128,
}

/// Instances are `gen_random(n, m, first_seed + k)` for every cell and
/// `k < seeds`; rows come out in (n, m, seed, algorithm) order.
pub fn sweep(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut cells = Vec::new();
    for n in cfg.n.0..=cfg.n.1 {
        for m in cfg.m.0..=cfg.m.1 {
            for k in 0..cfg.seeds {
                cells.push((n, m, cfg.first_seed + k));
            }
        }
    }
    let rows: Vec<Vec<BenchRow>> = cells
        .par_iter()
        .map(|&(n, m, seed)| {
            let inst = gen_random(n, m, seed, cfg.weights);
            let (opt, _) = optimal_social_cost(&inst);
            Algorithm::ALL
                .iter()
                .map(|&algo| {
                    let start = Instant::now();
                    let alloc = solve_general(&inst, algo)?;
                    let micros = start.elapsed().as_micros();
                    let sc = social_cost(&inst, &alloc)?;
                    let alpha = check_propx(&inst, &alloc, UpTo::Any)?.overall_alpha;
                    let ratio = (opt > rational::int(0)).then(|| &sc / &opt);
                    Ok(BenchRow {
                        n,
                        m,
                        seed,
                        algo: algo.name(),
                        alpha: alpha.to_string(),
                        sc: rational::format(&sc),
                        opt: rational::format(&opt),
                        ratio_float: ratio.as_ref().map(rational::to_f64),
                        ratio: ratio.as_ref().map(rational::format).unwrap_or_default(),
                        micros,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

#[derive(Debug, Serialize)]
struct AlgoSummary {
    algo: &'static str,
    runs: usize,
    max_alpha: Alpha,
    mean_ratio: Option<f64>,
    max_ratio: Option<f64>,
    mean_micros: f64,
    max_micros: u128,
}

fn summarize(rows: &[BenchRow]) -> Vec<AlgoSummary> {
    let mut by_algo: BTreeMap<&'static str, Vec<&BenchRow>> = BTreeMap::new();
    for r in rows {
        by_algo.entry(r.algo).or_default().push(r);
    }
    by_algo
        .into_iter()
        .map(|(algo, rs)| {
            let ratios: Vec<f64> = rs.iter().filter_map(|r| r.ratio_float).collect();
            let max_alpha = rs
                .iter()
                .map(|r| match r.alpha.as_str() {
                    "inf" => Alpha::Infinite,
                    s => Alpha::Finite(rational::parse(s).expect("alpha written by this module")),
                })
                .max()
                .unwrap_or_else(Alpha::zero);
            AlgoSummary {
                algo,
                runs: rs.len(),
                max_alpha,
                mean_ratio: (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
                max_ratio: ratios.iter().copied().reduce(f64::max),
                mean_micros: rs.iter().map(|r| r.micros as f64).sum::<f64>() / rs.len() as f64,
                max_micros: rs.iter().map(|r| r.micros).max().unwrap_or(0),
            }
        })
        .collect()
}

fn write_rows<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["n", "m", "seed", "algo", "alpha", "sc", "opt", "ratio", "ratio_float", "micros"])?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub(crate) fn bench(a: &BenchArgs, stdout: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let cfg = BenchConfig {
        n: parse_range(&a.n)?,
        m: parse_range(&a.m)?,
        seeds: a.seeds,
        first_seed: a.seed,
        weights: a.weights,
    };
    if cfg.n.0 == 0 && cfg.n.0 <= cfg.n.1 {
        return Err(Failure::Usage("--n must start at 1 or more".into()));
    }
    let rows = sweep(&cfg)?;
    match &a.out {
        Some(path) => {
            write_rows(fs::File::create(path)?, &rows)?;
            emit(&summarize(&rows), None, stdout)?;
        }
        None => write_rows(stdout, &rows)?,
    }
    Ok(EXIT_OK)
}
