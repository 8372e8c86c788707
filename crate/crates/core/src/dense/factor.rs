use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{LogDet, Matrix, Scalar};
use crate::error::{Error, Result};

/// Largest dimension accepted by [`det_cofactor_oracle`].
pub const COFACTOR_MAX_DIM: usize = 8;

/// Lower-triangular `L` with `a + shift·I = L·Lᴴ`.
///
/// The input is symmetrized to `(a + aᴴ)/2` after a Hermiticity check at the
/// default tolerance. Rows are produced top to bottom, so the factor of a
/// leading principal submatrix is bitwise the leading corner of the full factor.
pub fn cholesky(a: &Matrix, shift: f64) -> Result<Matrix> {
    a.require_square()?;
    let s = a.symmetrized()?;
    let s = if shift != 0.0 { s.add_identity(shift)? } else { s };
    let n = s.rows();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let mut acc = s.get(i, j);
            for k in 0..j {
                acc -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, acc / l.get(j, j).re);
        }
        let mut pivot = s.get(i, i).re;
        for k in 0..i {
            pivot -= l.get(i, k).norm_sqr();
        }
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite { index: i, pivot });
        }
        l.set(i, i, Scalar::new(pivot.sqrt(), 0.0));
    }
    Ok(l)
}

/// `log det a = 2·Σ log L_ii` for Hermitian positive definite `a`.
pub fn log_det_pd(a: &Matrix) -> Result<LogDet> {
    let l = cholesky(a, 0.0)?;
    Ok(LogDet::positive(log_det_from_factor(&l)))
}

pub(crate) fn log_det_from_factor(l: &Matrix) -> f64 {
    2.0 * (0..l.rows()).map(|i| l.get(i, i).re.ln()).sum::<f64>()
}

/// Log determinant of a Hermitian positive semidefinite matrix.
///
/// Returns `-inf` when the matrix is singular to working precision: the Cholesky
/// factorization breaks down, or some pivot `L_kk²` is at most `n·ε·max_i a_ii`.
/// Still rejects non-Hermitian input.
pub fn log_det_psd(a: &Matrix) -> Result<f64> {
    match cholesky(a, 0.0) {
        Ok(l) => {
            let n = a.rows();
            let scale = (0..n).map(|i| a.get(i, i).re).fold(0.0, f64::max);
            let floor = n as f64 * f64::EPSILON * scale;
            if (0..n).any(|k| l.get(k, k).re.powi(2) <= floor) {
                return Ok(f64::NEG_INFINITY);
            }
            Ok(log_det_from_factor(&l))
        }
        Err(Error::NotPositiveDefinite { .. }) => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    }
}

/// Determinant by LU factorization with partial (max-modulus) pivoting.
///
/// Each row swap negates the phase and each pivot contributes `pivot/|pivot|`.
/// An exactly zero pivot column yields [`LogDet::ZERO`].
pub fn det_lu(a: &Matrix) -> Result<LogDet> {
    let n = a.require_square()?;
    let mut w = a.clone();
    let mut phase = Scalar::new(1.0, 0.0);
    let mut log_abs = 0.0;
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, w.get(i, k).norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return Ok(LogDet::ZERO);
        }
        if p != k {
            for j in 0..n {
                let t = w.get(k, j);
                w.set(k, j, w.get(p, j));
                w.set(p, j, t);
            }
            phase = -phase;
        }
        let pivot = w.get(k, k);
        phase *= pivot / best;
        log_abs += best.ln();
        for i in (k + 1)..n {
            let f = w.get(i, k) / pivot;
            if f == Scalar::new(0.0, 0.0) {
                continue;
            }
            for j in (k + 1)..n {
                let v = w.get(i, j) - f * w.get(k, j);
                w.set(i, j, v);
            }
        }
    }
    Ok(LogDet::from_parts(phase / phase.norm(), log_abs))
}

/// Determinant by cofactor expansion, evaluated exactly.
///
/// Every finite double is `m·2^e` with integer `m`, so after scaling all entries
/// by a common power of two the expansion runs over Gaussian integers with no
/// rounding. Only the final logarithm and phase are rounded, which makes this a
/// reference that stays accurate on nearly singular input where floating-point
/// expansion cancels. Exponential cost, capped at [`COFACTOR_MAX_DIM`].
pub fn det_cofactor_oracle(a: &Matrix) -> Result<LogDet> {
    let n = a.require_square()?;
    if n > COFACTOR_MAX_DIM {
        return Err(Error::DimensionTooLarge { dim: n, max: COFACTOR_MAX_DIM });
    }
    let parts: Vec<[(i64, i32); 2]> = a.entries().iter().map(|z| [decompose(z.re), decompose(z.im)]).collect();
    let base = parts.iter().flatten().filter(|(m, _)| *m != 0).map(|&(_, e)| e).min().unwrap_or(0);
    let exact: Vec<Gaussian> = parts
        .iter()
        .map(|[re, im]| {
            let scale = |(m, e): (i64, i32)| BigInt::from(m) << (e - base) as usize;
            (scale(*re), scale(*im))
        })
        .collect();

    // minor[cols] = determinant of the trailing popcount(cols) rows restricted to `cols`
    let mut minor: Vec<Gaussian> = vec![(BigInt::zero(), BigInt::zero()); 1 << n];
    minor[0] = (BigInt::one(), BigInt::zero());
    for cols in 1usize..(1 << n) {
        let row = n - cols.count_ones() as usize;
        let mut acc = (BigInt::zero(), BigInt::zero());
        let mut negative = false;
        for j in 0..n {
            if cols & (1 << j) == 0 {
                continue;
            }
            let (er, ei) = &exact[row * n + j];
            let (mr, mi) = &minor[cols & !(1 << j)];
            if !(er.is_zero() && ei.is_zero()) {
                let re = er * mr - ei * mi;
                let im = er * mi + ei * mr;
                if negative {
                    acc.0 -= re;
                    acc.1 -= im;
                } else {
                    acc.0 += re;
                    acc.1 += im;
                }
            }
            negative = !negative;
        }
        minor[cols] = acc;
    }
    let (re, im) = &minor[(1 << n) - 1];
    if re.is_zero() && im.is_zero() {
        return Ok(LogDet::ZERO);
    }
    let shift = re.bits().max(im.bits()).saturating_sub(1000);
    let z = Scalar::new(to_f64(&(re >> shift as usize)), to_f64(&(im >> shift as usize)));
    // |det| = |z|·2^exp; rescale into range when possible so the log is rounded once
    let exp = shift as i64 + n as i64 * i64::from(base);
    let (mantissa, e) = split_pow2(z.norm());
    let total = e + exp;
    let log_abs = if total.abs() < 1000 {
        (mantissa * 2f64.powi(total as i32)).ln()
    } else {
        mantissa.ln() + total as f64 * std::f64::consts::LN_2
    };
    Ok(LogDet::from_parts(z / z.norm(), log_abs))
}

/// `x = m·2^e` with `m` in `[1, 2)`, for positive finite `x`.
fn split_pow2(x: f64) -> (f64, i64) {
    let e = x.log2().floor() as i64;
    let m = x * 2f64.powi(-e as i32);
    if m >= 2.0 {
        (m / 2.0, e + 1)
    } else if m < 1.0 {
        (m * 2.0, e - 1)
    } else {
        (m, e)
    }
}

type Gaussian = (BigInt, BigInt);

/// `x = m·2^e` with `|m| < 2^53`.
fn decompose(x: f64) -> (i64, i32) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1i64 << 52), exp - 1075) };
    if x.is_sign_negative() {
        (-m, e)
    } else {
        (m, e)
    }
}

fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().expect("shifted below the f64 range limit")
}
