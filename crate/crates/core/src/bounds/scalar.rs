//! Scalar inequalities on numbers `≥ 1`, evaluated directly in double precision.

use super::{BoundName, InequalityReport};
use crate::error::{Error, Result};

/// Inputs are expected in `[1, SCALAR_INPUT_CAP]`; larger values are accepted as
/// long as the direct products stay finite.
pub const SCALAR_INPUT_CAP: f64 = 1e3;

fn check_ge1(values: impl IntoIterator<Item = f64>) -> Result<()> {
    for x in values {
        if !x.is_finite() || x < 1.0 {
            return Err(Error::Domain(format!("entries must be finite and >= 1, got {x}")));
        }
    }
    Ok(())
}

fn finite_logs(name: BoundName, lhs: f64, rhs: f64, tol: f64) -> Result<InequalityReport> {
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::Domain(format!("{name}: direct evaluation overflowed")));
    }
    Ok(InequalityReport::new(name.as_str(), lhs.ln(), rhs.ln(), tol))
}

/// `∏_μ (Σ_i a^{(i)}_μ − (m−1)) ≥ Σ_i ∏_μ a^{(i)}_μ − (m−1)` for an `m×n` array `a`
/// with every entry `≥ 1` (rows indexed by `i`, columns by `μ`).
pub fn lemma23_check(a: &[Vec<f64>], tol: f64) -> Result<InequalityReport> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 || n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(Error::ShapeMismatch("expected a non-empty rectangular array".into()));
    }
    check_ge1(a.iter().flatten().copied())?;
    let shift = (m - 1) as f64;
    let lhs: f64 = (0..n).map(|mu| a.iter().map(|row| row[mu]).sum::<f64>() - shift).product();
    let rhs = a.iter().map(|row| row.iter().product::<f64>()).sum::<f64>() - shift;
    finite_logs(BoundName::Lemma23, lhs, rhs, tol)
}

/// `(Σ b_i − (m−1))^q ≥ Σ b_i^q − (m−1)` for `b_i ≥ 1` and integer `q ≥ 1`.
pub fn coro24_check(b: &[f64], q: u32, tol: f64) -> Result<InequalityReport> {
    if b.is_empty() {
        return Err(Error::ShapeMismatch("expected at least one value".into()));
    }
    if q == 0 {
        return Err(Error::Domain("exponent q must be a positive integer".into()));
    }
    check_ge1(b.iter().copied())?;
    let shift = (b.len() - 1) as f64;
    let exp = q as i32;
    let lhs = (b.iter().sum::<f64>() - shift).powi(exp);
    let rhs = b.iter().map(|x| x.powi(exp)).sum::<f64>() - shift;
    finite_logs(BoundName::Coro24, lhs, rhs, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma23_examples() {
        let r = lemma23_check(&[vec![1.0; 4], vec![1.0; 4], vec![1.0; 4]], 1e-9).unwrap();
        assert_eq!((r.lhs_log, r.rhs_log), (0.0, 0.0));

        let r = lemma23_check(&[vec![2.0, 3.0], vec![2.0, 2.0]], 1e-9).unwrap();
        assert_eq!(r.lhs_log, 12f64.ln());
        assert_eq!(r.rhs_log, 9f64.ln());
        assert!(r.holds);
    }

    #[test]
    fn lemma23_two_rows_is_product_inequality() {
        // ∏(a_μ + b_μ − 1) ≥ ∏a_μ + ∏b_μ − 1
        let a = vec![1.5, 2.0, 7.0];
        let b = vec![3.0, 1.0, 1.25];
        let r = lemma23_check(&[a.clone(), b.clone()], 1e-9).unwrap();
        let lhs: f64 = a.iter().zip(&b).map(|(x, y)| x + y - 1.0).product();
        let rhs = a.iter().product::<f64>() + b.iter().product::<f64>() - 1.0;
        assert_eq!((r.lhs_log, r.rhs_log), (lhs.ln(), rhs.ln()));
    }

    #[test]
    fn lemma23_errors() {
        assert!(matches!(lemma23_check(&[vec![0.5, 2.0]], 1e-9), Err(Error::Domain(_))));
        assert!(matches!(lemma23_check(&[vec![1.0, 2.0], vec![1.0]], 1e-9), Err(Error::ShapeMismatch(_))));
        assert!(lemma23_check(&[], 1e-9).is_err());
    }

    #[test]
    fn coro24_examples() {
        let r = coro24_check(&[2.0, 3.0, 5.5], 1, 1e-9).unwrap();
        assert_eq!(r.lhs_log, r.rhs_log);
        let r = coro24_check(&[2.0, 3.0], 2, 1e-9).unwrap();
        assert_eq!((r.lhs_log, r.rhs_log), (16f64.ln(), 12f64.ln()));
        let r = coro24_check(&[1.0; 5], 7, 1e-9).unwrap();
        assert_eq!((r.lhs_log, r.rhs_log), (0.0, 0.0));
        assert!(matches!(coro24_check(&[0.9], 2, 1e-9), Err(Error::Domain(_))));
        assert!(matches!(coro24_check(&[2.0], 0, 1e-9), Err(Error::Domain(_))));
    }
}
