//! Seeded generation of Hermitian PD/PSD matrices and block matrices.
//!
//! The random stream is SplitMix64, fully specified here so that instance streams
//! can be regenerated in any language:
//!
//! ```text
//! state  <- state + 0x9E3779B97F4A7C15          (wrapping)
//! z      <- state
//! z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 (wrapping)
//! z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB (wrapping)
//! output <- z ^ (z >> 31)
//! ```
//!
//! * uniform `[0,1)`: `(output >> 11) · 2⁻⁵³`
//! * integer in `[lo, hi]`: `lo + ((output · (hi−lo+1)) >> 64)` in 128-bit arithmetic
//! * standard normal: Box–Muller on `u1 = 1 − uniform`, `u2 = uniform`, returning
//!   `r·cos(2πu2)` and then the cached `r·sin(2πu2)`, `r = sqrt(−2 ln u1)`
//! * complex normal: real part first, then imaginary part, each standard normal
//! * sub-seeds: `derive_seed(seed, i)` is the first output of a generator seeded with `seed + i`

use std::f64::consts::PI;

use crate::block::{partition, BlockMatrix};
use crate::dense::{Matrix, Scalar};
use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Independent sub-seed for shard or instance `index`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    SplitMix64::new(seed.wrapping_add(index)).next_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Real,
    Complex,
}

/// Single-owner random source for matrices.
#[derive(Debug, Clone)]
pub struct Generator {
    rng: SplitMix64,
    spare_normal: Option<f64>,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Self { rng: SplitMix64::new(seed), spare_normal: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi);
        let span = (hi - lo) as u128 + 1;
        lo + ((self.rng.next_u64() as u128 * span) >> 64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.rng.next_u64() >> 63 == 1
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    fn scalar(&mut self, kind: ScalarKind) -> Scalar {
        match kind {
            ScalarKind::Real => Scalar::new(self.normal(), 0.0),
            ScalarKind::Complex => {
                let re = self.normal();
                Scalar::new(re, self.normal())
            }
        }
    }

    fn gaussian(&mut self, rows: usize, cols: usize, kind: ScalarKind) -> Matrix {
        let entries = (0..rows * cols).map(|_| self.scalar(kind)).collect();
        Matrix::from_raw(rows, cols, entries)
    }

    /// `G·Gᴴ + δI` with `δ` set from an upper estimate of `λ_max` so that the
    /// 2-norm condition number is at most `cond_cap`.
    pub fn pd(&mut self, dim: usize, cond_cap: f64, kind: ScalarKind) -> Matrix {
        let g = self.gaussian(dim, dim, kind);
        let gram = gram(&g);
        let lambda_max = lambda_max_upper(&gram);
        if cond_cap <= 1.0 {
            let mean = (0..dim).map(|i| gram.get(i, i).re).sum::<f64>() / dim as f64;
            return Matrix::identity(dim).scale(Scalar::new(mean.max(f64::MIN_POSITIVE), 0.0));
        }
        let delta = lambda_max / (cond_cap - 1.0);
        gram.add_identity(delta).expect("square")
    }

    /// Rank-deficient Gram matrix `G·Gᴴ` with `G` of shape `dim × (dim − deficit)`.
    pub fn psd_singular(&mut self, dim: usize, deficit: usize, kind: ScalarKind) -> Result<Matrix> {
        if deficit == 0 || deficit >= dim {
            return Err(Error::InvalidConfig(format!(
                "rank deficit must lie in 1..{dim}, got {deficit}"
            )));
        }
        let g = self.gaussian(dim, dim - deficit, kind);
        Ok(gram(&g))
    }

    pub fn block_pd(&mut self, n: usize, block_dim: usize, cond_cap: f64, kind: ScalarKind) -> BlockMatrix {
        let a = self.pd(n * block_dim, cond_cap, kind);
        partition(&a, n, block_dim, block_dim).expect("dimensions match by construction")
    }

    /// `m×n` array with entries uniform in `[1, cap]`.
    pub fn ge1_array(&mut self, m: usize, n: usize, cap: f64) -> Vec<Vec<f64>> {
        (0..m).map(|_| (0..n).map(|_| 1.0 + self.uniform() * (cap - 1.0)).collect()).collect()
    }
}

/// Exactly Hermitian `G·Gᴴ` (upper triangle computed, lower mirrored, real diagonal).
fn gram(g: &Matrix) -> Matrix {
    let (n, k) = (g.rows(), g.cols());
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Scalar::new(0.0, 0.0);
            for t in 0..k {
                acc += g.get(i, t) * g.get(j, t).conj();
            }
            if i == j {
                out.set(i, i, Scalar::new(acc.re, 0.0));
            } else {
                out.set(i, j, acc);
                out.set(j, i, acc.conj());
            }
        }
    }
    out
}

/// `min(trace, max row sum of |a_ij|)`; both bound `λ_max` from above for PSD input.
fn lambda_max_upper(a: &Matrix) -> f64 {
    let n = a.rows();
    let trace: f64 = (0..n).map(|i| a.get(i, i).re).sum();
    let gershgorin = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max);
    trace.min(gershgorin)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Dense { dim: usize },
    Block { n: usize, block_dim: usize },
}

impl Shape {
    pub fn total_dim(&self) -> usize {
        match *self {
            Shape::Dense { dim } => dim,
            Shape::Block { n, block_dim } => n * block_dim,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub shape: Shape,
    /// Upper bound on the 2-norm condition number, `≥ 1`.
    pub cond_cap: f64,
    pub kind: ScalarKind,
    /// `0` for positive definite output.
    pub rank_deficit: usize,
}

impl GenConfig {
    pub fn dense(seed: u64, dim: usize) -> Self {
        Self { seed, shape: Shape::Dense { dim }, cond_cap: 1e4, kind: ScalarKind::Real, rank_deficit: 0 }
    }

    pub fn block(seed: u64, n: usize, block_dim: usize) -> Self {
        Self { shape: Shape::Block { n, block_dim }, ..Self::dense(seed, 1) }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.shape.total_dim();
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be positive".into()));
        }
        if !(self.cond_cap >= 1.0) || !self.cond_cap.is_finite() {
            return Err(Error::InvalidConfig(format!("condition cap must be finite and >= 1, got {}", self.cond_cap)));
        }
        if self.rank_deficit >= dim {
            return Err(Error::InvalidConfig(format!(
                "rank deficit {} must be smaller than dimension {dim}",
                self.rank_deficit
            )));
        }
        Ok(())
    }
}

pub fn random_pd(cfg: &GenConfig) -> Result<Matrix> {
    cfg.validate()?;
    if cfg.rank_deficit != 0 {
        return Err(Error::InvalidConfig("random_pd requires rank_deficit == 0".into()));
    }
    Ok(Generator::new(cfg.seed).pd(cfg.shape.total_dim(), cfg.cond_cap, cfg.kind))
}

pub fn random_psd_singular(cfg: &GenConfig) -> Result<Matrix> {
    cfg.validate()?;
    Generator::new(cfg.seed).psd_singular(cfg.shape.total_dim(), cfg.rank_deficit, cfg.kind)
}

pub fn random_block_pd(cfg: &GenConfig) -> Result<BlockMatrix> {
    cfg.validate()?;
    let Shape::Block { n, block_dim } = cfg.shape else {
        return Err(Error::InvalidConfig("random_block_pd needs a block shape".into()));
    };
    let a = random_pd(cfg)?;
    partition(&a, n, block_dim, block_dim)
}

/// `m×n` array of doubles uniform in `[1, cap]`.
pub fn random_ge1_array(seed: u64, m: usize, n: usize, cap: f64) -> Result<Vec<Vec<f64>>> {
    if !(cap >= 1.0) || !cap.is_finite() {
        return Err(Error::InvalidConfig(format!("cap must be finite and >= 1, got {cap}")));
    }
    Ok(Generator::new(seed).ge1_array(m, n, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{cholesky, det_lu};

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 0 (widely published SplitMix64 vectors)
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn uniform_and_ints_stay_in_range() {
        let mut g = Generator::new(3);
        for _ in 0..10_000 {
            let u = g.uniform();
            assert!((0.0..1.0).contains(&u));
            let k = g.int_in(2, 5);
            assert!((2..=5).contains(&k));
        }
        assert_eq!(g.int_in(7, 7), 7);
    }

    #[test]
    fn normals_have_unit_moments() {
        let mut g = Generator::new(11);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| g.normal()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn random_pd_is_hermitian_pd_and_deterministic() {
        for kind in [ScalarKind::Real, ScalarKind::Complex] {
            let cfg = GenConfig { kind, ..GenConfig::dense(1, 3) };
            let a = random_pd(&cfg).unwrap();
            assert!(a.is_hermitian(1e-12).unwrap());
            cholesky(&a, 0.0).unwrap();
            assert!(a.bitwise_eq(&random_pd(&cfg).unwrap()));
            assert!(!a.bitwise_eq(&random_pd(&GenConfig { seed: 2, ..cfg }).unwrap()));
        }
    }

    #[test]
    fn condition_cap_bounds_pivot_spread() {
        // Cholesky pivots L_kk² lie in [λ_min, λ_max], so their spread is at most cond(A).
        let mut worst: f64 = 0.0;
        for seed in 0..1000 {
            let cfg = GenConfig { cond_cap: 10.0, ..GenConfig::dense(seed, 4) };
            let l = cholesky(&random_pd(&cfg).unwrap(), 0.0).unwrap();
            let piv: Vec<f64> = (0..4).map(|i| l.get(i, i).re.powi(2)).collect();
            let hi = piv.iter().copied().fold(0.0, f64::max);
            let lo = piv.iter().copied().fold(f64::INFINITY, f64::min);
            worst = worst.max(hi / lo);
        }
        assert!(worst <= 10.0, "worst pivot ratio {worst}");
    }

    #[test]
    fn cond_cap_one_gives_scaled_identity() {
        let a = random_pd(&GenConfig { cond_cap: 1.0, ..GenConfig::dense(5, 3) }).unwrap();
        let d = a.get(0, 0);
        assert_eq!(a, Matrix::identity(3).scale(d));
    }

    #[test]
    fn singular_psd_examples() {
        let cfg = GenConfig { rank_deficit: 1, ..GenConfig::dense(9, 2) };
        let a = random_psd_singular(&cfg).unwrap();
        assert!(det_lu(&a).unwrap().log_abs() < -30.0);
        assert!(a.bitwise_eq(&random_psd_singular(&cfg).unwrap()));
        assert!(random_psd_singular(&GenConfig::dense(9, 2)).is_err());
        assert!(random_psd_singular(&GenConfig { rank_deficit: 2, ..GenConfig::dense(9, 2) }).is_err());
    }

    #[test]
    fn block_pd_examples() {
        let one = random_block_pd(&GenConfig::block(4, 1, 3)).unwrap();
        assert_eq!(one.n(), 1);
        assert!(one.block(0, 0).bitwise_eq(&random_pd(&GenConfig::dense(4, 3)).unwrap()));

        let cfg = GenConfig { kind: ScalarKind::Complex, ..GenConfig::block(8, 3, 2) };
        let b = random_block_pd(&cfg).unwrap();
        let flat = b.flatten();
        assert!(flat.is_hermitian(1e-12).unwrap());
        cholesky(&flat, 0.0).unwrap();
        assert_eq!(b, random_block_pd(&cfg).unwrap());
        assert!(random_block_pd(&GenConfig::dense(1, 3)).is_err());
    }

    #[test]
    fn ge1_array_examples() {
        assert!(random_ge1_array(1, 3, 4, 1.0).unwrap().iter().flatten().all(|&x| x == 1.0));
        let a = random_ge1_array(2, 6, 8, 1e3).unwrap();
        assert!(a.iter().flatten().all(|&x| (1.0..=1e3).contains(&x)));
        assert_eq!(a, random_ge1_array(2, 6, 8, 1e3).unwrap());
        assert!(random_ge1_array(2, 1, 1, 0.5).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(GenConfig { cond_cap: 0.5, ..GenConfig::dense(0, 2) }.validate().is_err());
        assert!(GenConfig::dense(0, 0).validate().is_err());
        assert!(GenConfig { rank_deficit: 1, ..GenConfig::dense(0, 2) }.validate().is_ok());
    }

    #[test]
    fn derived_seeds_differ() {
        let s: Vec<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        let mut sorted = s.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), s.len());
    }
}
