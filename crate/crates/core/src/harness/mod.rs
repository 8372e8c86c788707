//! Sampled verification of every bound, reduction checks, and replay of stored instances.
//!
//! Instance `k` of bound `b` is generated from
//! `derive_seed(derive_seed(seed, index_of(b)), k)`, where `index_of` is the
//! position in [`BoundName::ALL`]. Instances are evaluated in parallel and merged
//! in index order, so reports do not depend on the thread count.

mod instance;
mod reductions;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use instance::{evaluate, parse_instance, replay, Instance};
pub use reductions::{check_reductions, ReductionCheck, ReductionReport};

use crate::block::partition;
use crate::bounds::{perturb_to_pd, BoundName, InequalityReport, DEFAULT_TOL, SCALAR_INPUT_CAP};
use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::gen::{derive_seed, Generator, ScalarKind};
use crate::logspace::serde_opt_f64;

/// `|marginLog|` at or below this counts as an equality hit.
pub const EQUALITY_THRESHOLD: f64 = 1e-9;
/// Shift applied (relative to `1 + ‖a‖_max`) when a singular instance is routed to a PD-only bound.
pub const SINGULAR_PERTURB_DELTA: f64 = 1e-6;
pub const LEMMA_MAX_ROWS: usize = 6;
pub const LEMMA_MAX_COLS: usize = 8;
pub const CORO24_MAX_Q: u32 = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples_per_bound: usize,
    pub max_n: usize,
    pub max_block_dim: usize,
    pub max_factors: usize,
    pub cond_cap: f64,
    pub tol: f64,
    pub bounds: Vec<BoundName>,
    pub include_singular: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            samples_per_bound: 1000,
            max_n: 5,
            max_block_dim: 3,
            max_factors: 4,
            cond_cap: 1e4,
            tol: DEFAULT_TOL,
            bounds: BoundName::ALL.to_vec(),
            include_singular: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_n == 0 || self.max_block_dim == 0 || self.max_factors == 0 {
            return Err(Error::InvalidConfig("size caps must be positive".into()));
        }
        let multi = [BoundName::Thm24, BoundName::Thm25, BoundName::Coro26, BoundName::Coro27];
        if self.max_factors < 2 && self.bounds.iter().any(|b| multi.contains(b)) {
            return Err(Error::InvalidConfig("multi-factor bounds need max_factors >= 2".into()));
        }
        if !(self.cond_cap >= 1.0) || !self.cond_cap.is_finite() {
            return Err(Error::InvalidConfig(format!("cond_cap must be finite and >= 1, got {}", self.cond_cap)));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::InvalidConfig(format!("tol must be finite and > 0, got {}", self.tol)));
        }
        Ok(())
    }
}

/// A failing instance with everything needed to regenerate or replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub bound: BoundName,
    /// `[suite seed, bound index, instance index]`.
    pub seed_path: [u64; 3],
    pub instance_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb_delta: Option<f64>,
    pub instance: Instance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<InequalityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundStats {
    pub name: BoundName,
    pub samples: usize,
    pub violations: usize,
    pub equality_hits: usize,
    /// `None` when no instance was evaluated.
    #[serde(with = "serde_opt_f64")]
    pub min_margin_log: Option<f64>,
    /// Mean over instances with a finite margin.
    #[serde(with = "serde_opt_f64")]
    pub mean_margin_log: Option<f64>,
    pub finite_margins: usize,
    pub singular_instances: usize,
    pub perturbed_instances: usize,
    /// Smallest per-μ ratio term (log units) over all instances, when the bound has any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_ratio_term_log: Option<f64>,
    /// Instances where the additive and ratio arrangements disagree.
    pub arrangement_mismatches: usize,
    pub violation_instances: Vec<Violation>,
}

impl BoundStats {
    fn empty(name: BoundName) -> Self {
        BoundStats {
            name,
            samples: 0,
            violations: 0,
            equality_hits: 0,
            min_margin_log: None,
            mean_margin_log: None,
            finite_margins: 0,
            singular_instances: 0,
            perturbed_instances: 0,
            min_ratio_term_log: None,
            arrangement_mismatches: 0,
            violation_instances: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Environment {
    pub seed: u64,
    pub version: String,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub bounds: Vec<BoundStats>,
    pub total_violations: usize,
    pub environment: Environment,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.total_violations == 0 && self.bounds.iter().all(|b| b.arrangement_mismatches == 0)
    }

    /// Copy with timing fields zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> SuiteReport {
        let mut r = self.clone();
        r.environment.wall_time_secs = 0.0;
        r
    }
}

struct Sampled {
    instance: Instance,
    singular: bool,
    perturb_delta: Option<f64>,
}

struct Outcome {
    seed_path: [u64; 3],
    instance_seed: u64,
    sampled: Sampled,
    result: Result<InequalityReport>,
}

pub fn bound_index(bound: BoundName) -> u64 {
    BoundName::ALL.iter().position(|&b| b == bound).expect("listed") as u64
}

pub fn instance_seed(seed: u64, bound: BoundName, index: u64) -> u64 {
    derive_seed(derive_seed(seed, bound_index(bound)), index)
}

/// Runs every requested bound on `samples_per_bound` generated instances.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut names = Vec::new();
    for &b in &cfg.bounds {
        if !names.contains(&b) {
            names.push(b);
        }
    }
    let mut stats = Vec::with_capacity(names.len());
    for bound in names {
        let outcomes: Vec<Outcome> = (0..cfg.samples_per_bound as u64)
            .into_par_iter()
            .map(|k| run_one(cfg, bound, k))
            .collect();
        stats.push(aggregate(bound, outcomes));
    }
    let total_violations = stats.iter().map(|s| s.violations).sum();
    Ok(SuiteReport {
        config: cfg.clone(),
        bounds: stats,
        total_violations,
        environment: Environment {
            seed: cfg.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
    })
}

fn run_one(cfg: &SuiteConfig, bound: BoundName, k: u64) -> Outcome {
    let seed = instance_seed(cfg.seed, bound, k);
    let mut gen = Generator::new(seed);
    let (sampled, result) = match sample_instance(cfg, bound, &mut gen) {
        Ok(s) => {
            let r = evaluate(bound, &s.instance, cfg.tol);
            (s, r)
        }
        Err(e) => {
            let empty = Instance::Matrices { matrices: Vec::new() };
            (Sampled { instance: empty, singular: false, perturb_delta: None }, Err(e))
        }
    };
    Outcome { seed_path: [cfg.seed, bound_index(bound), k], instance_seed: seed, sampled, result }
}

fn aggregate(bound: BoundName, outcomes: Vec<Outcome>) -> BoundStats {
    let mut s = BoundStats::empty(bound);
    let mut margin_sum = 0.0;
    for o in outcomes {
        s.samples += 1;
        s.singular_instances += o.sampled.singular as usize;
        s.perturbed_instances += o.sampled.perturb_delta.is_some() as usize;
        let (report, error) = match o.result {
            Ok(r) => {
                s.min_margin_log = Some(s.min_margin_log.map_or(r.margin_log, |m| m.min(r.margin_log)));
                if r.margin_log.is_finite() {
                    margin_sum += r.margin_log;
                    s.finite_margins += 1;
                }
                if r.margin_log.abs() <= EQUALITY_THRESHOLD {
                    s.equality_hits += 1;
                }
                for t in r.terms.iter().flat_map(|t| &t.ratio_terms) {
                    s.min_ratio_term_log = Some(s.min_ratio_term_log.map_or(*t, |m: f64| m.min(*t)));
                }
                if r.ratio_form.as_ref().is_some_and(|f| !f.consistent) {
                    s.arrangement_mismatches += 1;
                }
                if r.holds {
                    continue;
                }
                (Some(r), None)
            }
            Err(e) => {
                s.min_margin_log = Some(f64::NEG_INFINITY);
                (None, Some(e.to_string()))
            }
        };
        s.violations += 1;
        s.violation_instances.push(Violation {
            bound,
            seed_path: o.seed_path,
            instance_seed: o.instance_seed,
            perturb_delta: o.sampled.perturb_delta,
            instance: o.sampled.instance,
            report,
            error,
        });
    }
    if s.finite_margins > 0 {
        s.mean_margin_log = Some(margin_sum / s.finite_margins as f64);
    }
    s
}

fn kind(gen: &mut Generator) -> ScalarKind {
    if gen.coin() {
        ScalarKind::Complex
    } else {
        ScalarKind::Real
    }
}

/// Draws a singular PSD matrix of dimension `dim ≥ 2` with a random rank deficit.
fn singular(gen: &mut Generator, dim: usize, kind: ScalarKind) -> Result<Matrix> {
    let deficit = gen.int_in(1, dim - 1);
    gen.psd_singular(dim, deficit, kind)
}

/// Generates the factor matrices of one instance: PD by default; with
/// `include_singular`, half the instances replace one factor (of dimension ≥ 2)
/// by a singular PSD matrix, perturbed back to PD for bounds that require it.
fn factors(
    cfg: &SuiteConfig,
    bound: BoundName,
    gen: &mut Generator,
    dims: &[usize],
    kind: ScalarKind,
) -> Result<(Vec<Matrix>, bool, Option<f64>)> {
    let target = if cfg.include_singular && gen.coin() {
        let k = gen.int_in(0, dims.len() - 1);
        (dims[k] >= 2).then_some(k)
    } else {
        None
    };
    let mut out = Vec::with_capacity(dims.len());
    let mut delta = None;
    for (i, &d) in dims.iter().enumerate() {
        if Some(i) == target {
            let s = singular(gen, d, kind)?;
            if bound.admits_semidefinite() {
                out.push(s);
            } else {
                out.push(perturb_to_pd(&s, SINGULAR_PERTURB_DELTA)?);
                delta = Some(SINGULAR_PERTURB_DELTA);
            }
        } else {
            out.push(gen.pd(d, cfg.cond_cap, kind));
        }
    }
    Ok((out, target.is_some(), delta))
}

fn sample_instance(cfg: &SuiteConfig, bound: BoundName, gen: &mut Generator) -> Result<Sampled> {
    use BoundName::*;
    let kind = kind(gen);
    let sampled = match bound {
        Hadamard | Oppenheim | OppenheimSchur | Chen | Coro26 | Coro27 => {
            let n = gen.int_in(1, cfg.max_n);
            let m = match bound {
                Hadamard => 1,
                Coro26 | Coro27 => gen.int_in(2, cfg.max_factors),
                _ => 2,
            };
            let (matrices, singular, perturb_delta) = factors(cfg, bound, gen, &vec![n; m], kind)?;
            Sampled { instance: Instance::Matrices { matrices }, singular, perturb_delta }
        }
        Fischer => {
            let dim = gen.int_in(2, cfg.max_n.max(2));
            let split = gen.int_in(1, dim - 1);
            let (mut ms, singular, perturb_delta) = factors(cfg, bound, gen, &[dim], kind)?;
            Sampled { instance: Instance::Split { matrix: ms.remove(0), split }, singular, perturb_delta }
        }
        Kim | Thm21 | Thm24 | Thm25 => {
            let n = gen.int_in(1, cfg.max_n);
            let block_dims: Vec<usize> = match bound {
                Kim => vec![gen.int_in(1, cfg.max_block_dim); 2],
                Thm21 => (0..2).map(|_| gen.int_in(1, cfg.max_block_dim)).collect(),
                _ => {
                    let m = gen.int_in(2, cfg.max_factors);
                    (0..m).map(|_| gen.int_in(1, cfg.max_block_dim)).collect()
                }
            };
            let dims: Vec<usize> = block_dims.iter().map(|&q| n * q).collect();
            let (ms, singular, perturb_delta) = factors(cfg, bound, gen, &dims, kind)?;
            let factors = ms
                .iter()
                .zip(&block_dims)
                .map(|(a, &q)| partition(a, n, q, q))
                .collect::<Result<Vec<_>>>()?;
            Sampled { instance: Instance::Blocks { factors }, singular, perturb_delta }
        }
        Lemma23 => {
            let m = gen.int_in(1, LEMMA_MAX_ROWS);
            let n = gen.int_in(1, LEMMA_MAX_COLS);
            let rows = gen.ge1_array(m, n, SCALAR_INPUT_CAP);
            Sampled { instance: Instance::Array { rows }, singular: false, perturb_delta: None }
        }
        Coro24 => {
            let m = gen.int_in(1, LEMMA_MAX_ROWS);
            let q = gen.int_in(1, CORO24_MAX_Q as usize) as u32;
            let values = gen.ge1_array(1, m, SCALAR_INPUT_CAP).remove(0);
            Sampled { instance: Instance::Powers { values, q }, singular: false, perturb_delta: None }
        }
    };
    Ok(sampled)
}

/// Regenerates instance `k` of `bound` exactly as [`run_suite`] does.
pub fn regenerate_instance(cfg: &SuiteConfig, bound: BoundName, k: u64) -> Result<Instance> {
    let mut gen = Generator::new(instance_seed(cfg.seed, bound, k));
    Ok(sample_instance(cfg, bound, &mut gen)?.instance)
}
