//! Independent oracles for the integration tests. Nothing here calls the
//! factorizations under test.
#![allow(dead_code)]

use blockdet::gen::{Generator, ScalarKind};
use blockdet::{BlockMatrix, Matrix, Scalar};

/// Leibniz expansion over all permutations (Heap's algorithm); dimension ≤ 8.
pub fn leibniz_det(a: &Matrix) -> Scalar {
    let n = a.rows();
    assert!(n == a.cols() && n <= 8);
    if n == 0 {
        return Scalar::new(1.0, 0.0);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let term = |perm: &[usize], sign: f64| -> Scalar {
        perm.iter().enumerate().fold(Scalar::new(sign, 0.0), |acc, (i, &j)| acc * a.get(i, j))
    };
    let mut sign = 1.0;
    let mut total = term(&perm, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            total += term(&perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    total
}

/// `ln det` of a Hermitian PD matrix via the Leibniz oracle.
pub fn ln_det(a: &Matrix) -> f64 {
    let d = leibniz_det(a);
    assert!(d.re > 0.0, "oracle determinant not positive: {d}");
    d.re.ln()
}

pub fn leading(a: &Matrix, k: usize) -> Matrix {
    sub(a, 0, k)
}

/// Square submatrix of rows/cols `start..start+len`.
pub fn sub(a: &Matrix, start: usize, len: usize) -> Matrix {
    let entries = (0..len * len).map(|t| a.get(start + t / len, start + t % len)).collect();
    Matrix::new(len, len, entries).unwrap()
}

/// Khatri-Rao product assembled entry by entry from the index formula
/// `(𝑨∗𝑩)[(i,r,s),(j,c,t)] = A_ij[r,c]·B_ij[s,t]`, for square blocks.
pub fn khatri_rao_by_index(factors: &[Matrix], n: usize) -> Matrix {
    let dims: Vec<usize> = factors.iter().map(|f| f.rows() / n).collect();
    let q: usize = dims.iter().product();
    let size = n * q;
    let mut entries = Vec::with_capacity(size * size);
    for row in 0..size {
        for col in 0..size {
            let (i, j) = (row / q, col / q);
            let (mut r, mut c) = (row % q, col % q);
            let mut v = Scalar::new(1.0, 0.0);
            // digits of r and c in the mixed radix (q_1, …, q_m), most significant first
            let mut stride = q;
            for (f, &d) in factors.iter().zip(&dims) {
                stride /= d;
                let (ri, ci) = (r / stride, c / stride);
                r %= stride;
                c %= stride;
                v *= f.get(i * d + ri, j * d + ci);
            }
            entries.push(v);
        }
    }
    Matrix::new(size, size, entries).unwrap()
}

pub fn kind(complex: bool) -> ScalarKind {
    if complex {
        ScalarKind::Complex
    } else {
        ScalarKind::Real
    }
}

pub fn pd(seed: u64, dim: usize, complex: bool) -> Matrix {
    Generator::new(seed).pd(dim, 1e4, kind(complex))
}

pub fn block_pd(seed: u64, n: usize, k: usize, complex: bool) -> BlockMatrix {
    Generator::new(seed).block_pd(n, k, 1e4, kind(complex))
}

/// General (non-Hermitian) matrix with standard normal entries.
pub fn general(seed: u64, dim: usize, complex: bool) -> Matrix {
    let mut g = Generator::new(seed);
    let entries = (0..dim * dim)
        .map(|_| Scalar::new(g.normal(), if complex { g.normal() } else { 0.0 }))
        .collect();
    Matrix::new(dim, dim, entries).unwrap()
}

pub fn real(rows: &[&[f64]]) -> Matrix {
    Matrix::from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}
