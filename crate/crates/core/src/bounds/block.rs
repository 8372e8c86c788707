//! Khatri-Rao bounds on block matrices with square blocks, and their scalar
//! (`1×1`-block) corollaries.
//!
//! For factors `𝑨^{(i)} ∈ 𝕄_n(𝕄_{q_i})` write `Q = q₁⋯q_m` and `e_i = Q/q_i`.
//! The exponent `e_i` is always formed as the product of the other block
//! dimensions, never by division.

use super::{check_psd_shape, same_dims, BoundName, BoundTerms, InequalityReport, RatioForm};
use crate::block::{diagonal_block, khatri_rao_all, BlockMatrix};
use crate::dense::{cholesky, log_det_pd, log_det_psd, Matrix};
use crate::error::{Error, Result};
use crate::logspace::{log_margin, log_one_plus_sum_expm1, log_sum_exp};

/// Tolerance on the normalized slack gap between the two arrangements of the
/// multi-factor Oppenheim–Schur inequality.
const ARRANGEMENT_GAP_TOL: f64 = 1e-8;

/// Log determinants of a positive definite block factor.
struct PdLogs {
    log_det: f64,
    /// `log(det A_μμ · det 𝑨_{μ−1} / det 𝑨_μ)` for `μ = 2..=n`.
    ratios: Vec<f64>,
}

fn pd_logs(a: &BlockMatrix) -> Result<PdLogs> {
    let k = a.square_block_dim()?;
    let n = a.n();
    let l = cholesky(&a.flatten(), 0.0)?;
    // log det 𝑨_μ from the leading corner of one factorization; rows are computed
    // top-down, so this is bitwise what a separate factorization of 𝑨_μ gives.
    let leading: Vec<f64> = (1..=n)
        .map(|mu| 2.0 * (0..mu * k).map(|t| l.get(t, t).re.ln()).sum::<f64>())
        .collect();
    let mut ratios = Vec::with_capacity(n.saturating_sub(1));
    for mu in 2..=n {
        let diag = log_det_pd(diagonal_block(a, mu)?)?.log_abs();
        ratios.push(diag + leading[mu - 2] - leading[mu - 1]);
    }
    Ok(PdLogs { log_det: leading[n - 1], ratios })
}

/// `e_i = ∏_{j≠i} q_j`.
fn exponents(dims: &[usize]) -> Result<Vec<u64>> {
    (0..dims.len())
        .map(|i| {
            dims.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .try_fold(1u64, |acc, (_, &q)| acc.checked_mul(q as u64))
                .ok_or_else(|| Error::Domain("block-dimension product overflows".into()))
        })
        .collect()
}

fn common_grid(factors: &[BlockMatrix]) -> Result<usize> {
    let first = factors.first().ok_or(Error::EmptyFactorList)?;
    for f in factors {
        if f.n() != first.n() {
            return Err(Error::BlockGridMismatch { left: first.n(), right: f.n() });
        }
    }
    Ok(first.n())
}

fn block_dims(factors: &[BlockMatrix]) -> Result<Vec<usize>> {
    factors.iter().map(BlockMatrix::square_block_dim).collect()
}

/// Two-factor Khatri-Rao bound for `𝑨 ∈ 𝕄_n(𝕄_p)`, `𝑩 ∈ 𝕄_n(𝕄_q)`:
///
/// `det(𝑨∗𝑩) ≥ (det 𝑨)^q (det 𝑩)^p ∏_{μ≥2}[(det A_μμ det 𝑨_{μ−1}/det 𝑨_μ)^q + (det B_μμ det 𝑩_{μ−1}/det 𝑩_μ)^p − 1]`.
pub fn thm21_bound(a: &BlockMatrix, b: &BlockMatrix, tol: f64) -> Result<InequalityReport> {
    two_factor(BoundName::Thm21, a, b, tol)
}

/// The equal-block-size case `p = q = k` of [`thm21_bound`].
pub fn kim_bound(a: &BlockMatrix, b: &BlockMatrix, tol: f64) -> Result<InequalityReport> {
    let (p, q) = (a.square_block_dim()?, b.square_block_dim()?);
    if p != q {
        return Err(Error::UnequalBlockDims { p, q });
    }
    two_factor(BoundName::Kim, a, b, tol)
}

fn two_factor(name: BoundName, a: &BlockMatrix, b: &BlockMatrix, tol: f64) -> Result<InequalityReport> {
    if a.n() != b.n() {
        return Err(Error::BlockGridMismatch { left: a.n(), right: b.n() });
    }
    let p = a.square_block_dim()? as f64;
    let q = b.square_block_dim()? as f64;
    let la = pd_logs(a)?;
    let lb = pd_logs(b)?;
    let lhs = log_det_pd(&khatri_rao_all(&[a.clone(), b.clone()])?.flatten())?.log_abs();

    let mut terms = Vec::with_capacity(la.ratios.len());
    let mut factor_sum = 0.0;
    for (k, (&ra, &rb)) in la.ratios.iter().zip(&lb.ratios).enumerate() {
        let ts = [q * ra, p * rb];
        let factor_log = log_one_plus_sum_expm1(&ts);
        factor_sum += factor_log;
        terms.push(BoundTerms {
            mu: k + 2,
            ratio_terms: ts.to_vec(),
            r_mu_log: Some(ts[0]),
            s_mu_log: Some(factor_log),
            factor_log,
        });
    }
    let base = 0.0 + q * la.log_det + p * lb.log_det;
    let mut report = InequalityReport::new(name.as_str(), lhs, base + factor_sum, tol);
    report.terms = terms;
    Ok(report)
}

/// Multi-factor Khatri-Rao bound:
///
/// `det(∏∗𝑨^{(i)}) ≥ ∏(det 𝑨^{(i)})^{e_i} ∏_{μ≥2}[Σ_i (det A^{(i)}_μμ det 𝑨^{(i)}_{μ−1}/det 𝑨^{(i)}_μ)^{e_i} − (m−1)]`.
///
/// The statement needs `m ≥ 2`; with a single factor it reverses into Fischer's
/// inequality and is reported as such (generally not holding).
pub fn thm24_bound(factors: &[BlockMatrix], tol: f64) -> Result<InequalityReport> {
    product_bound(BoundName::Thm24, factors, tol)
}

fn product_bound(name: BoundName, factors: &[BlockMatrix], tol: f64) -> Result<InequalityReport> {
    let n = common_grid(factors)?;
    let dims = block_dims(factors)?;
    let m = factors.len();
    let e = exponents(&dims)?;
    let logs = factors.iter().map(pd_logs).collect::<Result<Vec<_>>>()?;
    let lhs = log_det_pd(&khatri_rao_all(factors)?.flatten())?.log_abs();

    // R_μ and S_μ split the last factor off the first m−1.
    let split = if m >= 2 {
        let head_e = exponents(&dims[..m - 1])?;
        let head_q: u64 = dims[..m - 1].iter().map(|&q| q as u64).product();
        let partial = pd_logs(&khatri_rao_all(&factors[..m - 1])?)?;
        Some((head_e, head_q, partial))
    } else {
        None
    };

    let mut terms = Vec::with_capacity(n.saturating_sub(1));
    let mut factor_sum = 0.0;
    for k in 0..n.saturating_sub(1) {
        let ts: Vec<f64> = logs.iter().zip(&e).map(|(l, &ei)| ei as f64 * l.ratios[k]).collect();
        let factor_log = log_one_plus_sum_expm1(&ts);
        factor_sum += factor_log;
        let (r_mu_log, s_mu_log) = match &split {
            Some((head_e, head_q, partial)) => {
                let q_last = dims[m - 1] as f64;
                let head: Vec<f64> =
                    logs[..m - 1].iter().zip(head_e).map(|(l, &ei)| ei as f64 * l.ratios[k]).collect();
                let r = q_last * log_one_plus_sum_expm1(&head);
                let s = log_one_plus_sum_expm1(&[
                    q_last * partial.ratios[k],
                    *head_q as f64 * logs[m - 1].ratios[k],
                ]);
                (Some(r), Some(s))
            }
            None => (None, None),
        };
        terms.push(BoundTerms { mu: k + 2, ratio_terms: ts, r_mu_log, s_mu_log, factor_log });
    }
    let base = logs.iter().zip(&e).fold(0.0, |acc, (l, &ei)| acc + ei as f64 * l.log_det);
    let mut report = InequalityReport::new(name.as_str(), lhs, base + factor_sum, tol);
    report.terms = terms;
    Ok(report)
}

/// Multi-factor Oppenheim–Schur inequality for positive semidefinite factors:
///
/// `det(∏∗𝑨^{(i)}) + (m−1)∏_j(det 𝑨^{(j)})^{e_j} ≥ Σ_i (∏_μ det A^{(i)}_μμ)^{e_i} ∏_{j≠i}(det 𝑨^{(j)})^{e_j}`.
///
/// This additive arrangement is the headline report and is defined for singular
/// factors. When all factors are nonsingular the equivalent ratio arrangement is
/// evaluated as well and the two are cross-checked in [`RatioForm`].
pub fn thm25_ineq(factors: &[BlockMatrix], tol: f64) -> Result<InequalityReport> {
    additive_bound(BoundName::Thm25, factors, tol)
}

fn additive_bound(name: BoundName, factors: &[BlockMatrix], tol: f64) -> Result<InequalityReport> {
    let n = common_grid(factors)?;
    let dims = block_dims(factors)?;
    let m = factors.len();
    let e: Vec<f64> = exponents(&dims)?.into_iter().map(|x| x as f64).collect();

    let mut log_dets = Vec::with_capacity(m);
    let mut diag_sums = Vec::with_capacity(m);
    for f in factors {
        let flat = f.flatten();
        check_psd_shape(&flat)?;
        log_dets.push(log_det_psd(&flat)?);
        let mut s = 0.0;
        for mu in 1..=n {
            s += log_det_psd(diagonal_block(f, mu)?)?;
        }
        diag_sums.push(s);
    }
    let lhs_det = log_det_psd(&khatri_rao_all(factors)?.flatten())?;

    let base = log_dets.iter().zip(&e).fold(0.0, |acc, (&ld, &ei)| acc + ei * ld);
    let lhs = log_sum_exp(&[lhs_det, ((m - 1) as f64).ln() + base]);
    let rhs_terms: Vec<f64> = (0..m)
        .map(|i| {
            let others = (0..m).filter(|&j| j != i).fold(0.0, |acc, j| acc + e[j] * log_dets[j]);
            e[i] * diag_sums[i] + others
        })
        .collect();
    let rhs = log_sum_exp(&rhs_terms);
    let mut report = InequalityReport::new(name.as_str(), lhs, rhs, tol);

    if log_dets.iter().all(|ld| ld.is_finite()) && lhs.is_finite() {
        let ts: Vec<f64> = (0..m).map(|i| e[i] * (diag_sums[i] - log_dets[i])).collect();
        let rhs_ratio = base + log_one_plus_sum_expm1(&ts);
        let slack_ratio = (lhs_det - lhs).exp() - (rhs_ratio - lhs).exp();
        let slack_additive = 1.0 - (rhs - lhs).exp();
        let slack_gap = (slack_ratio - slack_additive).abs();
        report.ratio_form = Some(RatioForm {
            lhs_log: lhs_det,
            rhs_log: rhs_ratio,
            margin_log: log_margin(lhs_det, rhs_ratio),
            slack_gap,
            consistent: slack_gap <= ARRANGEMENT_GAP_TOL,
        });
    }
    Ok(report)
}

fn scalar_grids(mats: &[Matrix]) -> Result<Vec<BlockMatrix>> {
    let first = mats.first().ok_or(Error::EmptyFactorList)?;
    for m in mats {
        same_dims(first, m)?;
    }
    mats.iter().map(BlockMatrix::from_scalar_grid).collect()
}

/// Multi-factor Hadamard bound, the `q_i = 1` case of [`thm24_bound`].
pub fn coro26_bound(factors: &[Matrix], tol: f64) -> Result<InequalityReport> {
    product_bound(BoundName::Coro26, &scalar_grids(factors)?, tol)
}

/// Multi-factor Hadamard Oppenheim–Schur inequality, the `q_i = 1` case of [`thm25_ineq`].
pub fn coro27_ineq(factors: &[Matrix], tol: f64) -> Result<InequalityReport> {
    additive_bound(BoundName::Coro27, &scalar_grids(factors)?, tol)
}

/// `a + δ·(1 + ‖a‖_max)·I`, checked to be Cholesky-factorizable.
pub fn perturb_to_pd(a: &Matrix, delta: f64) -> Result<Matrix> {
    a.require_square()?;
    let sym = a.symmetrized()?;
    let out = if delta == 0.0 { sym } else { sym.add_identity(delta * (1.0 + a.max_abs()))? };
    cholesky(&out, 0.0)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::partition;
    use crate::bounds::{chen_bound, oppenheim_schur_ineq};

    fn real(rows: &[&[f64]]) -> Matrix {
        Matrix::from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn block_eye(n: usize, k: usize) -> BlockMatrix {
        partition(&Matrix::identity(n * k), n, k, k).unwrap()
    }

    fn a4() -> Matrix {
        real(&[
            &[4.0, 1.0, 0.5, 0.2],
            &[1.0, 3.0, 0.3, 0.1],
            &[0.5, 0.3, 2.5, 0.4],
            &[0.2, 0.1, 0.4, 2.0],
        ])
    }

    fn b2() -> Matrix {
        real(&[&[3.0, 1.0], &[1.0, 3.0]])
    }

    #[test]
    fn exponents_are_products_of_other_dims() {
        assert_eq!(exponents(&[2, 3, 5]).unwrap(), vec![15, 10, 6]);
        assert_eq!(exponents(&[4]).unwrap(), vec![1]);
    }

    #[test]
    fn block_identities_give_equality() {
        let r = thm21_bound(&block_eye(3, 2), &block_eye(3, 3), 1e-8).unwrap();
        assert_eq!((r.lhs_log, r.rhs_log), (0.0, 0.0));
        let r = thm24_bound(&[block_eye(2, 1), block_eye(2, 2), block_eye(2, 3)], 1e-8).unwrap();
        assert_eq!((r.lhs_log, r.rhs_log), (0.0, 0.0));
        let r = thm25_ineq(&[block_eye(3, 2), block_eye(3, 2)], 1e-8).unwrap();
        assert!(r.margin_log.abs() < 1e-15);
        let eye = vec![Matrix::identity(3); 3];
        assert_eq!(coro26_bound(&eye, 1e-8).unwrap().margin_log, 0.0);
        assert!(coro27_ineq(&eye, 1e-8).unwrap().margin_log.abs() < 1e-15);
    }

    #[test]
    fn thm21_unit_blocks_match_chen() {
        let a = real(&[&[2.0, 1.0, 0.3], &[1.0, 2.0, 0.2], &[0.3, 0.2, 1.5]]);
        let b = real(&[&[3.0, 1.0, 0.1], &[1.0, 3.0, 0.7], &[0.1, 0.7, 2.0]]);
        let chen = chen_bound(&a, &b, 1e-8).unwrap();
        let t21 = thm21_bound(
            &BlockMatrix::from_scalar_grid(&a).unwrap(),
            &BlockMatrix::from_scalar_grid(&b).unwrap(),
            1e-8,
        )
        .unwrap();
        assert!(t21.discrepancy(&chen) < 1e-12, "{}", t21.discrepancy(&chen));
        let c26 = coro26_bound(&[a, b], 1e-8).unwrap();
        assert!(c26.discrepancy(&chen) < 1e-12);
    }

    #[test]
    fn thm24_two_factors_match_thm21() {
        let a = partition(&a4(), 2, 2, 2).unwrap();
        let b = BlockMatrix::from_scalar_grid(&b2()).unwrap();
        let t21 = thm21_bound(&a, &b, 1e-8).unwrap();
        let t24 = thm24_bound(&[a, b], 1e-8).unwrap();
        assert!(t24.discrepancy(&t21) <= 1e-12);
        assert!(t21.holds);
    }

    #[test]
    fn kim_requires_equal_block_dims() {
        let a = partition(&a4(), 2, 2, 2).unwrap();
        let b = BlockMatrix::from_scalar_grid(&b2()).unwrap();
        assert_eq!(kim_bound(&a, &b, 1e-8).unwrap_err(), Error::UnequalBlockDims { p: 2, q: 1 });
        let r = kim_bound(&a, &a, 1e-8).unwrap();
        assert_eq!(r.name, "kim");
        assert!(r.holds);
    }

    #[test]
    fn block_bound_errors() {
        let rect = partition(&Matrix::identity(4).submatrix(0, 0, 4, 2), 2, 2, 1).unwrap();
        assert!(matches!(thm21_bound(&rect, &block_eye(2, 1), 1e-8), Err(Error::NonSquareBlocks { .. })));
        assert!(matches!(thm24_bound(&[], 1e-8), Err(Error::EmptyFactorList)));
        assert!(matches!(
            thm24_bound(&[block_eye(2, 1), block_eye(3, 1)], 1e-8),
            Err(Error::BlockGridMismatch { .. })
        ));
        let singular = BlockMatrix::from_scalar_grid(&real(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap();
        assert!(matches!(
            thm24_bound(&[singular.clone(), block_eye(2, 1)], 1e-8),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(thm25_ineq(&[singular, block_eye(2, 1)], 1e-8).is_ok());
        assert!(matches!(
            coro26_bound(&[Matrix::identity(2), Matrix::identity(3)], 1e-8),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn single_factor_reverses_to_fischer() {
        let a = partition(&a4(), 2, 2, 2).unwrap();
        let r = thm24_bound(std::slice::from_ref(&a), 1e-8).unwrap();
        assert!(!r.holds);
        assert!(r.terms[0].r_mu_log.is_none());
    }

    #[test]
    fn thm25_unit_blocks_match_oppenheim_schur() {
        let a = real(&[&[2.0, 1.0, 0.3], &[1.0, 2.0, 0.2], &[0.3, 0.2, 1.5]]);
        let b = real(&[&[3.0, 1.0, 0.1], &[1.0, 3.0, 0.7], &[0.1, 0.7, 2.0]]);
        let os = oppenheim_schur_ineq(&a, &b, 1e-8).unwrap();
        let grids = [BlockMatrix::from_scalar_grid(&a).unwrap(), BlockMatrix::from_scalar_grid(&b).unwrap()];
        let t25 = thm25_ineq(&grids, 1e-8).unwrap();
        assert!(t25.discrepancy(&os) <= 1e-12);
        let c27 = coro27_ineq(&[a, b], 1e-8).unwrap();
        assert!(c27.discrepancy(&os) <= 1e-12);
        assert!(t25.ratio_form.as_ref().unwrap().consistent);
    }

    #[test]
    fn thm25_singular_diagonal_block_zeroes_rhs() {
        let singular = BlockMatrix::from_scalar_grid(&Matrix::diag_real(&[1.0, 0.0]).unwrap()).unwrap();
        let other = BlockMatrix::from_scalar_grid(&b2()).unwrap();
        let r = thm25_ineq(&[singular, other], 1e-8).unwrap();
        assert_eq!(r.rhs_log, f64::NEG_INFINITY);
        assert!(r.holds);
        assert!(r.ratio_form.is_none());
    }

    #[test]
    fn coro27_singular_factor_worked_example() {
        // A = diag(1,0), B = [[3,1],[1,3]]: det(A∘B) = 0, every RHS term carries a zero
        let r = coro27_ineq(&[Matrix::diag_real(&[1.0, 0.0]).unwrap(), b2()], 1e-8).unwrap();
        assert_eq!(r.lhs_log, f64::NEG_INFINITY);
        assert_eq!(r.rhs_log, f64::NEG_INFINITY);
        assert!(r.holds);
    }

    #[test]
    fn perturb_examples() {
        let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert_eq!(perturb_to_pd(&a, 0.0).unwrap(), a);
        let p = perturb_to_pd(&Matrix::diag_real(&[1.0, 0.0]).unwrap(), 1e-8).unwrap();
        assert_eq!(p, Matrix::diag_real(&[1.0 + 2e-8, 2e-8]).unwrap());
        let z = perturb_to_pd(&Matrix::zeros(3, 3), 1e-8).unwrap();
        assert_eq!(z, Matrix::diag_real(&[1e-8; 3]).unwrap());
        let skew = real(&[&[1.0, 1.0], &[-1.0, 1.0]]);
        assert!(matches!(perturb_to_pd(&skew, 1e-8), Err(Error::NotHermitian { .. })));
    }
}
