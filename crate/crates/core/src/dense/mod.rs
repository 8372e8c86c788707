//! Dense complex matrices and the products and factorizations built on them.

mod factor;
mod json;
mod logdet;

pub use factor::{cholesky, det_cofactor_oracle, det_lu, log_det_pd, log_det_psd, COFACTOR_MAX_DIM};
pub use logdet::LogDet;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entry type of every matrix: a double-precision complex number.
pub type Scalar = Complex64;

/// Dense row-major complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes and non-finite values.
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(k) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k / cols, col: k % cols });
        }
        Ok(Self { rows, cols, entries })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, entries: Vec<Scalar>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self { rows, cols, entries }
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&x| Scalar::new(x, 0.0)).collect())
    }

    /// Real matrix from nested rows; all rows must have the same length.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_real(r, c, &flat)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![Scalar::new(0.0, 0.0); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Scalar::new(1.0, 0.0);
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut flat = vec![0.0; n * n];
        for (i, &v) in values.iter().enumerate() {
            flat[i * n + i] = v;
        }
        Self::from_real(n, n, &flat)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, z: Scalar) {
        self.entries[i * self.cols + j] = z;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// True when every imaginary part is +0.0.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im.to_bits() == 0)
    }

    /// Largest entry modulus, `‖a‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.get(i, i)).collect()
    }

    pub fn conjugate_transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest deviation `|a_ij - conj(a_ji)|` from Hermitian symmetry.
    pub fn hermitian_deviation(&self) -> Result<f64> {
        let n = self.require_square()?;
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        Ok(dev)
    }

    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        Ok(self.hermitian_deviation()? <= tol)
    }

    /// Default Hermiticity tolerance `1e-10·(1 + ‖a‖_max)`.
    pub fn default_hermitian_tol(&self) -> f64 {
        1e-10 * (1.0 + self.max_abs())
    }

    /// Checks Hermiticity at the default tolerance and returns `(a + aᴴ)/2`.
    pub fn symmetrized(&self) -> Result<Matrix> {
        let tol = self.default_hermitian_tol();
        let deviation = self.hermitian_deviation()?;
        if deviation > tol {
            return Err(Error::NotHermitian { deviation, tol });
        }
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            out.set(i, i, Scalar::new(self.get(i, i).re, 0.0));
            for j in (i + 1)..n {
                let z = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                out.set(i, j, z);
                out.set(j, i, z.conj());
            }
        }
        Ok(out)
    }

    /// `A ⊗ B = [a_ij·B]`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Entrywise product `A ∘ B`.
    pub fn hadamard(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "Hadamard product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| a * b).collect();
        Ok(Matrix::from_raw(self.rows, self.cols, entries))
    }

    pub fn scale(&self, c: Scalar) -> Matrix {
        Matrix::from_raw(self.rows, self.cols, self.entries.iter().map(|&z| c * z).collect())
    }

    /// Top-left `k×k` corner, `1 ≤ k ≤ rows`.
    pub fn leading_principal(&self, k: usize) -> Result<Matrix> {
        let n = self.require_square()?;
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, max: n });
        }
        Ok(self.submatrix(0, 0, k, k))
    }

    /// Rows `[r0, r0+rows)` and columns `[c0, c0+cols)`. Panics when out of bounds.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "submatrix out of bounds");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            entries.extend_from_slice(&self.entries[i * self.cols + c0..i * self.cols + c0 + cols]);
        }
        Matrix::from_raw(rows, cols, entries)
    }

    /// Principal submatrix on the given (ordered) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Result<Matrix> {
        let n = self.require_square()?;
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad + 1, max: n });
        }
        let k = idx.len();
        let mut entries = Vec::with_capacity(k * k);
        for &i in idx {
            for &j in idx {
                entries.push(self.get(i, j));
            }
        }
        Ok(Matrix::from_raw(k, k, entries))
    }

    /// `self + shift·I`.
    pub fn add_identity(&self, shift: f64) -> Result<Matrix> {
        let n = self.require_square()?;
        let mut out = self.clone();
        for i in 0..n {
            let z = out.get(i, i);
            out.set(i, i, Scalar::new(z.re + shift, z.im));
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Bitwise equality of all entries, distinguishing `-0.0` from `0.0`.
    pub fn bitwise_eq(&self, other: &Matrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| {
                a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> Matrix {
        Matrix::from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(Matrix::new(2, 2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(Matrix::new(0, 2, vec![]).is_err());
        let err = Matrix::new(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn conjugate_transpose_examples() {
        let a = Matrix::new(1, 1, vec![c(2.0, 3.0)]).unwrap();
        assert_eq!(a.conjugate_transpose().get(0, 0), c(2.0, -3.0));
        assert_eq!(Matrix::identity(3).conjugate_transpose(), Matrix::identity(3));
        let row = Matrix::new(1, 2, vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let col = row.conjugate_transpose();
        assert_eq!((col.rows(), col.cols()), (2, 1));
        assert_eq!(col.get(0, 0), c(0.0, -1.0));
        assert_eq!(col.get(1, 0), c(1.0, 0.0));
    }

    #[test]
    fn matmul_examples() {
        let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert_eq!(a.matmul(&Matrix::identity(2)).unwrap(), a);
        let b = real(&[&[3.0, 1.0], &[1.0, 3.0]]);
        assert_eq!(a.matmul(&b).unwrap(), real(&[&[7.0, 5.0], &[5.0, 7.0]]));
        let u = real(&[&[1.0, 2.0]]);
        let v = real(&[&[3.0], &[4.0]]);
        assert_eq!(u.matmul(&v).unwrap(), real(&[&[11.0]]));
        assert!(matches!(u.matmul(&u), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn hermitian_examples() {
        assert!(real(&[&[2.0, 1.0], &[1.0, 2.0]]).is_hermitian(1e-12).unwrap());
        let skew = Matrix::new(2, 2, vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        assert!(!skew.is_hermitian(1e-12).unwrap());
        let herm = Matrix::new(2, 2, vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)]).unwrap();
        assert!(herm.is_hermitian(1e-12).unwrap());
        assert!(matches!(
            Matrix::zeros(2, 3).is_hermitian(1e-12),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn kronecker_examples() {
        let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert_eq!(a.kronecker(&real(&[&[1.0]])), a);

        let k = real(&[&[1.0, 2.0], &[3.0, 4.0]]).kronecker(&real(&[&[0.0, 1.0], &[1.0, 0.0]]));
        let expected = real(&[
            &[0.0, 1.0, 0.0, 2.0],
            &[1.0, 0.0, 2.0, 0.0],
            &[0.0, 3.0, 0.0, 4.0],
            &[3.0, 0.0, 4.0, 0.0],
        ]);
        assert_eq!(k, expected);
    }

    #[test]
    fn hadamard_examples() {
        let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let ones = real(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(a.hadamard(&ones).unwrap(), a);
        let b = real(&[&[3.0, 1.0], &[1.0, 3.0]]);
        assert_eq!(a.hadamard(&b).unwrap(), real(&[&[6.0, 1.0], &[1.0, 6.0]]));
        assert_eq!(a.hadamard(&Matrix::identity(2)).unwrap(), Matrix::diag_real(&[2.0, 2.0]).unwrap());
        assert!(a.hadamard(&Matrix::identity(3)).is_err());
    }

    #[test]
    fn hadamard_is_principal_submatrix_of_kronecker() {
        let a = real(&[&[2.0, 1.0, 0.5], &[1.0, 2.0, 0.25], &[0.5, 0.25, 3.0]]);
        let b = Matrix::new(
            3,
            3,
            (0..9).map(|k| c(k as f64 * 0.3 - 1.0, (k % 4) as f64 * 0.1)).collect(),
        )
        .unwrap();
        let n = 3;
        let idx: Vec<usize> = (0..n).map(|i| i * n + i).collect();
        let sub = a.kronecker(&b).principal_submatrix(&idx).unwrap();
        assert!(sub.bitwise_eq(&a.hadamard(&b).unwrap()));
    }

    #[test]
    fn leading_principal_examples() {
        let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert_eq!(a.leading_principal(2).unwrap(), a);
        assert_eq!(a.leading_principal(1).unwrap(), real(&[&[2.0]]));
        assert_eq!(Matrix::identity(5).leading_principal(3).unwrap(), Matrix::identity(3));
        assert_eq!(a.leading_principal(3).unwrap_err(), Error::IndexOutOfRange { index: 3, max: 2 });
        assert!(a.leading_principal(0).is_err());
    }

    #[test]
    fn symmetrize_averages_off_diagonal() {
        let a = real(&[&[2.0, 1.0], &[1.0 + 1e-12, 2.0]]);
        let s = a.symmetrized().unwrap();
        assert_eq!(s.get(0, 1), s.get(1, 0));
        let far = real(&[&[2.0, 1.0], &[1.5, 2.0]]);
        assert!(matches!(far.symmetrized(), Err(Error::NotHermitian { .. })));
    }
}
