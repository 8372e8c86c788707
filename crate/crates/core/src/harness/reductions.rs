//! Reduction identities between bounds, checked on sampled instances.
//!
//! Each check draws `samples_per_bound` instances; instance `k` of check `c` is
//! generated from `derive_seed(derive_seed(seed, REDUCTION_STREAM + c), k)`, so the
//! streams never collide with those of [`super::run_suite`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SuiteConfig;
use crate::block::{khatri_rao, partition, BlockMatrix};
use crate::bounds::{
    chen_bound, coro26_bound, coro27_ineq, hadamard_ineq, kim_bound, oppenheim_ineq, oppenheim_schur_ineq,
    thm21_bound, thm24_bound, thm25_ineq, InequalityReport,
};
use crate::dense::Matrix;
use crate::error::Result;
use crate::gen::{derive_seed, Generator, ScalarKind};
use crate::logspace::serde_f64;

/// Largest admissible discrepancy, in log units, between the two sides of a reduction.
pub const REDUCTION_THRESHOLD: f64 = 1e-12;
const REDUCTION_STREAM: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReductionCheck {
    pub name: String,
    pub samples: usize,
    /// Largest report discrepancy, or for bitwise checks the number of mismatching instances.
    #[serde(with = "serde_f64")]
    pub max_discrepancy: f64,
    pub threshold: f64,
    pub bitwise: bool,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReductionReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<ReductionCheck>,
    pub passed: bool,
}

type Pair = Result<(InequalityReport, InequalityReport)>;

/// Report-level checks: each returns the two reports that must agree.
const REPORT_CHECKS: [(&str, fn(&SuiteConfig, &mut Generator) -> Pair); 7] = [
    ("thm24_vs_thm21", thm24_vs_thm21),
    ("thm21_vs_chen", thm21_vs_chen),
    ("kim_vs_thm21", kim_vs_thm21),
    ("coro26_vs_chen", coro26_vs_chen),
    ("coro27_vs_oppenheim_schur", coro27_vs_oppenheim_schur),
    ("thm25_vs_oppenheim_schur", thm25_vs_oppenheim_schur),
    ("oppenheim_identity_vs_hadamard", oppenheim_identity_vs_hadamard),
];

/// Bitwise checks: each returns whether the two computations agree exactly.
const BITWISE_CHECKS: [(&str, fn(&SuiteConfig, &mut Generator) -> Result<bool>); 2] =
    [("khatri_rao_vs_hadamard", khatri_rao_vs_hadamard), ("khatri_rao_vs_kronecker", khatri_rao_vs_kronecker)];

pub fn check_reductions(cfg: &SuiteConfig) -> Result<ReductionReport> {
    cfg.validate()?;
    let samples = cfg.samples_per_bound;
    let mut checks = Vec::new();
    for (c, (name, f)) in REPORT_CHECKS.iter().enumerate() {
        let results: Vec<Result<f64>> = (0..samples as u64)
            .into_par_iter()
            .map(|k| {
                let mut gen = stream(cfg.seed, c as u64, k);
                f(cfg, &mut gen).map(|(x, y)| x.discrepancy(&y))
            })
            .collect();
        checks.push(summarize(name, samples, false, results));
    }
    for (c, (name, f)) in BITWISE_CHECKS.iter().enumerate() {
        let offset = (REPORT_CHECKS.len() + c) as u64;
        let results: Vec<Result<f64>> = (0..samples as u64)
            .into_par_iter()
            .map(|k| {
                let mut gen = stream(cfg.seed, offset, k);
                f(cfg, &mut gen).map(|same| if same { 0.0 } else { 1.0 })
            })
            .collect();
        checks.push(summarize(name, samples, true, results));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(ReductionReport { seed: cfg.seed, samples, checks, passed })
}

fn stream(seed: u64, check: u64, k: u64) -> Generator {
    Generator::new(derive_seed(derive_seed(seed, REDUCTION_STREAM + check), k))
}

fn summarize(name: &str, samples: usize, bitwise: bool, results: Vec<Result<f64>>) -> ReductionCheck {
    let mut max = 0.0f64;
    let mut errors = Vec::new();
    for r in results {
        match r {
            // bitwise checks count mismatches, report checks take the maximum
            Ok(d) if bitwise => max += d,
            Ok(d) => max = if d.is_nan() { f64::NAN } else { max.max(d) },
            Err(e) => errors.push(e.to_string()),
        }
    }
    let threshold = if bitwise { 0.0 } else { REDUCTION_THRESHOLD };
    let passed = errors.is_empty() && max <= threshold;
    ReductionCheck { name: name.to_string(), samples, max_discrepancy: max, threshold, bitwise, passed, errors }
}

fn kind(gen: &mut Generator) -> ScalarKind {
    if gen.coin() {
        ScalarKind::Complex
    } else {
        ScalarKind::Real
    }
}

fn blocks(gen: &mut Generator, cfg: &SuiteConfig, n: usize, q: usize, kind: ScalarKind) -> BlockMatrix {
    gen.block_pd(n, q, cfg.cond_cap, kind)
}

fn thm24_vs_thm21(cfg: &SuiteConfig, gen: &mut Generator) -> Pair {
    let kind = kind(gen);
    let n = gen.int_in(1, cfg.max_n);
    let (p, q) = (gen.int_in(1, cfg.max_block_dim), gen.int_in(1, cfg.max_block_dim));
    let a = blocks(gen, cfg, n, p, kind);
    let b = blocks(gen, cfg, n, q, kind);
    Ok((thm24_bound(&[a.clone(), b.clone()], cfg.tol)?, thm21_bound(&a, &b, cfg.tol)?))
}

fn thm21_vs_chen(cfg: &SuiteConfig, gen: &mut Generator) -> Pair {
    let kind = kind(gen);
    let n = gen.int_in(1, cfg.max_n);
    let a = gen.pd(n, cfg.cond_cap, kind);
    let b = gen.pd(n, cfg.cond_cap, kind);
    let (ga, gb) = (BlockMatrix::from_scalar_grid(&a)?, BlockMatrix::from_scalar_grid(&b)?);
    Ok((thm21_bound(&ga, &gb, cfg.tol)?, chen_bound(&a, &b, cfg.tol)?))
}

fn kim_vs_thm21(cfg: &SuiteConfig, gen: &mut Generator) -> Pair {
    let kind = kind(gen);
    let n = gen.int_in(1, cfg.max_n);
    let k = gen.int_in(1, cfg.max_block_dim);
    let a = blocks(gen, cfg, n, k, kind);
    let b = blocks(gen, cfg, n, k, kind);
    Ok((kim_bound(&a, &b, cfg.tol)?, thm21_bound(&a, &b, cfg.tol)?))
}

fn two_matrices(cfg: &SuiteConfig, gen: &mut Generator) -> (Matrix, Matrix) {
    let kind = kind(gen);
    let n = gen.int_in(1, cfg.max_n);
    (gen.pd(n, cfg.cond_cap, kind), gen.pd(n, cfg.cond_cap, kind))
}

fn coro26_vs_chen(cfg: &SuiteConfig, gen: &mut Generator) -> Pair {
    let (a, b) = two_matrices(cfg, gen);
    Ok((coro26_bound(&[a.clone(), b.clone()], cfg.tol)?, chen_bound(&a, &b, cfg.tol)?))
}

fn coro27_vs_oppenheim_schur(cfg: &SuiteConfig, gen: &mut Generator) -> Pair {
    let (a, b) = two_matrices(cfg, gen);
    Ok((coro27_ineq(&[a.clone(), b.clone()], cfg.tol)?, oppenheim_schur_ineq(&a, &b, cfg.tol)?))
}

fn thm25_vs_oppenheim_schur(cfg: &SuiteConfig, gen: &mut Generator) -> Pair {
    let (a, b) = two_matrices(cfg, gen);
    let (ga, gb) = (BlockMatrix::from_scalar_grid(&a)?, BlockMatrix::from_scalar_grid(&b)?);
    Ok((thm25_ineq(&[ga, gb], cfg.tol)?, oppenheim_schur_ineq(&a, &b, cfg.tol)?))
}

/// With `B = I`, the first link of Oppenheim's chain is Hadamard's inequality.
fn oppenheim_identity_vs_hadamard(cfg: &SuiteConfig, gen: &mut Generator) -> Pair {
    let kind = kind(gen);
    let n = gen.int_in(1, cfg.max_n);
    let a = gen.pd(n, cfg.cond_cap, kind);
    let chain = oppenheim_ineq(&a, &Matrix::identity(n), cfg.tol)?;
    let link = &chain.chain[0];
    let first = InequalityReport::new("oppenheim_first_link", link.lhs_log, link.rhs_log, cfg.tol);
    Ok((first, hadamard_ineq(&a, cfg.tol)?))
}

fn khatri_rao_vs_hadamard(cfg: &SuiteConfig, gen: &mut Generator) -> Result<bool> {
    let (a, b) = two_matrices(cfg, gen);
    let kr = khatri_rao(&BlockMatrix::from_scalar_grid(&a)?, &BlockMatrix::from_scalar_grid(&b)?)?;
    Ok(kr.flatten().bitwise_eq(&a.hadamard(&b)?))
}

fn khatri_rao_vs_kronecker(cfg: &SuiteConfig, gen: &mut Generator) -> Result<bool> {
    let kind = kind(gen);
    let (p, q) = (gen.int_in(1, cfg.max_n), gen.int_in(1, cfg.max_n));
    let a = gen.pd(p, cfg.cond_cap, kind);
    let b = gen.pd(q, cfg.cond_cap, kind);
    let kr = khatri_rao(&partition(&a, 1, p, p)?, &partition(&b, 1, q, q)?)?;
    Ok(kr.flatten().bitwise_eq(&a.kronecker(&b)))
}
