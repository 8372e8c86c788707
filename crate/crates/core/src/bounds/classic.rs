//! Scalar-entry inequalities: Hadamard, Fischer, Oppenheim, Oppenheim–Schur and Chen.

use super::{check_psd_shape, log_diag_product, same_dims, BoundName, BoundTerms, InequalityReport};
use crate::dense::{cholesky, log_det_pd, log_det_psd, Matrix};
use crate::error::{Error, Result};
use crate::logspace::{log_one_plus_sum_expm1, log_sum_exp};

/// `∏ a_ii ≥ det A`.
pub fn hadamard_ineq(a: &Matrix, tol: f64) -> Result<InequalityReport> {
    a.require_square()?;
    check_psd_shape(a)?;
    Ok(InequalityReport::new(BoundName::Hadamard.as_str(), log_diag_product(a), log_det_psd(a)?, tol))
}

/// `∏ a_ii ≥ det A₁₁·det A₂₂ ≥ det A` for the split after row `split_row`.
pub fn fischer_ineq(a: &Matrix, split_row: usize, tol: f64) -> Result<InequalityReport> {
    let n = a.require_square()?;
    if split_row == 0 || split_row >= n {
        return Err(Error::IndexOutOfRange { index: split_row, max: n.saturating_sub(1) });
    }
    check_psd_shape(a)?;
    let top = a.submatrix(0, 0, split_row, split_row);
    let bottom = a.submatrix(split_row, split_row, n - split_row, n - split_row);
    let blocks = log_det_psd(&top)? + log_det_psd(&bottom)?;
    Ok(InequalityReport::chain(
        BoundName::Fischer.as_str(),
        &[log_diag_product(a), blocks, log_det_psd(a)?],
        tol,
    ))
}

/// `det(A∘B) ≥ det A·∏ b_ii ≥ det A·det B`.
pub fn oppenheim_ineq(a: &Matrix, b: &Matrix, tol: f64) -> Result<InequalityReport> {
    same_dims(a, b)?;
    check_psd_shape(a)?;
    check_psd_shape(b)?;
    let ld_ab = log_det_psd(&a.hadamard(b)?)?;
    let ld_a = log_det_psd(a)?;
    let ld_b = log_det_psd(b)?;
    Ok(InequalityReport::chain(
        BoundName::Oppenheim.as_str(),
        &[ld_ab, ld_a + log_diag_product(b), ld_a + ld_b],
        tol,
    ))
}

/// `det(A∘B) + det(AB) ≥ det A·∏ b_ii + det B·∏ a_ii`.
pub fn oppenheim_schur_ineq(a: &Matrix, b: &Matrix, tol: f64) -> Result<InequalityReport> {
    same_dims(a, b)?;
    check_psd_shape(a)?;
    check_psd_shape(b)?;
    let ld_ab = log_det_psd(&a.hadamard(b)?)?;
    let ld_a = log_det_psd(a)?;
    let ld_b = log_det_psd(b)?;
    let lhs = log_sum_exp(&[ld_ab, ld_a + ld_b]);
    let rhs = log_sum_exp(&[ld_a + log_diag_product(b), ld_b + log_diag_product(a)]);
    Ok(InequalityReport::new(BoundName::OppenheimSchur.as_str(), lhs, rhs, tol))
}

/// `det(A∘B) ≥ det(AB)·∏_{μ≥2}(a_μμ det A_{μ−1}/det A_μ + b_μμ det B_{μ−1}/det B_μ − 1)`.
///
/// The ratio `a_μμ det A_{μ−1}/det A_μ` equals `a_μμ / L_μμ²` for the Cholesky
/// factor `L` of `A`, so one factorization per matrix yields every term.
pub fn chen_bound(a: &Matrix, b: &Matrix, tol: f64) -> Result<InequalityReport> {
    same_dims(a, b)?;
    let la = cholesky(a, 0.0)?;
    let lb = cholesky(b, 0.0)?;
    let lhs = log_det_pd(&a.hadamard(b)?)?.log_abs();

    let pivot_logs = |x: &Matrix, l: &Matrix| -> Vec<f64> {
        (0..x.rows()).map(|k| x.get(k, k).re.ln() - 2.0 * l.get(k, k).re.ln()).collect()
    };
    let ra = pivot_logs(a, &la);
    let rb = pivot_logs(b, &lb);
    let ld_a = 2.0 * (0..a.rows()).map(|k| la.get(k, k).re.ln()).sum::<f64>();
    let ld_b = 2.0 * (0..b.rows()).map(|k| lb.get(k, k).re.ln()).sum::<f64>();

    let mut terms = Vec::with_capacity(a.rows().saturating_sub(1));
    let mut factor_sum = 0.0;
    for k in 1..a.rows() {
        let factor_log = log_one_plus_sum_expm1(&[ra[k], rb[k]]);
        factor_sum += factor_log;
        terms.push(BoundTerms {
            mu: k + 1,
            ratio_terms: vec![ra[k], rb[k]],
            r_mu_log: Some(ra[k]),
            s_mu_log: Some(factor_log),
            factor_log,
        });
    }
    let mut report = InequalityReport::new(BoundName::Chen.as_str(), lhs, ld_a + ld_b + factor_sum, tol);
    report.terms = terms;
    Ok(report)
}
