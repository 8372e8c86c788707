//! Block matrices `𝑨 = [A_ij]` on an `n×n` grid of `p×q` blocks and the Khatri-Rao
//! product `𝑨∗𝑩 = [A_ij ⊗ B_ij]`.

use serde::{Deserialize, Deserializer, Serialize};

use crate::dense::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockMatrix {
    n: usize,
    p: usize,
    q: usize,
    blocks: Vec<Vec<Matrix>>,
}

impl BlockMatrix {
    /// Builds a block matrix from an explicit grid; every block must be `p×q`.
    pub fn new(blocks: Vec<Vec<Matrix>>) -> Result<Self> {
        let n = blocks.len();
        if n == 0 || blocks[0].is_empty() {
            return Err(Error::DimensionMismatch("block grid must be non-empty".into()));
        }
        let (p, q) = (blocks[0][0].rows(), blocks[0][0].cols());
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "block row {i} has {} blocks, expected {n}",
                    row.len()
                )));
            }
            for (j, b) in row.iter().enumerate() {
                if (b.rows(), b.cols()) != (p, q) {
                    return Err(Error::DimensionMismatch(format!(
                        "block ({i},{j}) is {}x{}, expected {p}x{q}",
                        b.rows(),
                        b.cols()
                    )));
                }
            }
        }
        Ok(Self { n, p, q, blocks })
    }

    /// Wraps an `n×n` matrix as a grid of `1×1` blocks.
    pub fn from_scalar_grid(a: &Matrix) -> Result<Self> {
        let n = a.require_square()?;
        partition(a, n, 1, 1)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn block(&self, i: usize, j: usize) -> &Matrix {
        &self.blocks[i][j]
    }

    pub fn blocks(&self) -> &[Vec<Matrix>] {
        &self.blocks
    }

    pub(crate) fn square_block_dim(&self) -> Result<usize> {
        if self.p == self.q {
            Ok(self.p)
        } else {
            Err(Error::NonSquareBlocks { p: self.p, q: self.q })
        }
    }

    pub fn flatten(&self) -> Matrix {
        flatten(self)
    }
}

impl<'de> Deserialize<'de> for BlockMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            n: usize,
            p: usize,
            q: usize,
            blocks: Vec<Vec<Matrix>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let bm = BlockMatrix::new(raw.blocks).map_err(serde::de::Error::custom)?;
        if (bm.n, bm.p, bm.q) != (raw.n, raw.p, raw.q) {
            return Err(serde::de::Error::custom(format!(
                "declared shape n={} p={} q={} does not match blocks (n={} p={} q={})",
                raw.n, raw.p, raw.q, bm.n, bm.p, bm.q
            )));
        }
        Ok(bm)
    }
}

/// Splits an `(n·p)×(n·q)` matrix into its `n×n` grid of `p×q` blocks.
pub fn partition(a: &Matrix, n: usize, p: usize, q: usize) -> Result<BlockMatrix> {
    if n == 0 || p == 0 || q == 0 || a.rows() != n * p || a.cols() != n * q {
        return Err(Error::DimensionMismatch(format!(
            "cannot partition {}x{} into {n}x{n} blocks of {p}x{q}",
            a.rows(),
            a.cols()
        )));
    }
    let blocks = (0..n)
        .map(|i| (0..n).map(|j| a.submatrix(i * p, j * q, p, q)).collect())
        .collect();
    Ok(BlockMatrix { n, p, q, blocks })
}

/// Assembles the `(n·p)×(n·q)` matrix in grid order.
pub fn flatten(a: &BlockMatrix) -> Matrix {
    let (n, p, q) = (a.n, a.p, a.q);
    let mut out = Matrix::zeros(n * p, n * q);
    for (i, row) in a.blocks.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            for r in 0..p {
                for c in 0..q {
                    out.set(i * p + r, j * q + c, b.get(r, c));
                }
            }
        }
    }
    out
}

/// Khatri-Rao product: block `(i,j)` of the result is `A_ij ⊗ B_ij`.
pub fn khatri_rao(a: &BlockMatrix, b: &BlockMatrix) -> Result<BlockMatrix> {
    if a.n != b.n {
        return Err(Error::BlockGridMismatch { left: a.n, right: b.n });
    }
    let blocks = a
        .blocks
        .iter()
        .zip(&b.blocks)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.kronecker(y)).collect())
        .collect();
    Ok(BlockMatrix { n: a.n, p: a.p * b.p, q: a.q * b.q, blocks })
}

/// Left fold of [`khatri_rao`] over the factor list.
pub fn khatri_rao_all(factors: &[BlockMatrix]) -> Result<BlockMatrix> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyFactorList)?;
    rest.iter().try_fold(first.clone(), |acc, f| khatri_rao(&acc, f))
}

/// Leading `μ×μ` block corner `𝑨_μ = [A_ij]_{i,j≤μ}`.
pub fn leading_block_submatrix(a: &BlockMatrix, mu: usize) -> Result<BlockMatrix> {
    if mu == 0 || mu > a.n {
        return Err(Error::IndexOutOfRange { index: mu, max: a.n });
    }
    let blocks = a.blocks[..mu].iter().map(|row| row[..mu].to_vec()).collect();
    Ok(BlockMatrix { n: mu, p: a.p, q: a.q, blocks })
}

/// The diagonal block `A_μμ` (1-based `mu`).
pub fn diagonal_block(a: &BlockMatrix, mu: usize) -> Result<&Matrix> {
    if mu == 0 || mu > a.n {
        return Err(Error::IndexOutOfRange { index: mu, max: a.n });
    }
    Ok(&a.blocks[mu - 1][mu - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::Scalar;

    fn sample(rows: usize, cols: usize, salt: f64) -> Matrix {
        Matrix::new(
            rows,
            cols,
            (0..rows * cols)
                .map(|k| Scalar::new((k as f64 + salt).sin(), (k as f64 * salt).cos() * 0.5))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn partition_examples() {
        let a = sample(2, 3, 0.7);
        let one = partition(&a, 1, 2, 3).unwrap();
        assert_eq!(one.block(0, 0), &a);

        let eye = partition(&Matrix::identity(4), 2, 2, 2).unwrap();
        assert_eq!(eye.block(0, 0), &Matrix::identity(2));
        assert_eq!(eye.block(1, 1), &Matrix::identity(2));
        assert_eq!(eye.block(0, 1), &Matrix::zeros(2, 2));

        let b = sample(6, 4, 1.3);
        assert!(flatten(&partition(&b, 2, 3, 2).unwrap()).bitwise_eq(&b));
        assert!(partition(&b, 2, 2, 2).is_err());
    }

    #[test]
    fn flatten_examples() {
        let x = Matrix::from_real(1, 1, &[4.25]).unwrap();
        assert_eq!(flatten(&BlockMatrix::new(vec![vec![x.clone()]]).unwrap()), x);
        let eye = partition(&Matrix::identity(6), 3, 2, 2).unwrap();
        assert_eq!(flatten(&eye), Matrix::identity(6));
        let zeros = BlockMatrix::new(vec![vec![Matrix::zeros(2, 1); 2]; 2]).unwrap();
        assert_eq!(flatten(&zeros), Matrix::zeros(4, 2));
    }

    #[test]
    fn new_rejects_inconsistent_blocks() {
        let bad = vec![vec![Matrix::zeros(2, 2), Matrix::zeros(2, 1)], vec![Matrix::zeros(2, 2); 2]];
        assert!(BlockMatrix::new(bad).is_err());
        let ragged = vec![vec![Matrix::zeros(1, 1)], vec![Matrix::zeros(1, 1); 2]];
        assert!(BlockMatrix::new(ragged).is_err());
    }

    #[test]
    fn khatri_rao_reduces_to_hadamard_and_kronecker() {
        let a = sample(3, 3, 0.2);
        let b = sample(3, 3, 2.9);
        let kr = khatri_rao(&BlockMatrix::from_scalar_grid(&a).unwrap(), &BlockMatrix::from_scalar_grid(&b).unwrap())
            .unwrap();
        assert!(flatten(&kr).bitwise_eq(&a.hadamard(&b).unwrap()));

        let c = sample(2, 3, 0.4);
        let d = sample(3, 2, 1.1);
        let kr = khatri_rao(&partition(&c, 1, 2, 3).unwrap(), &partition(&d, 1, 3, 2).unwrap()).unwrap();
        assert!(flatten(&kr).bitwise_eq(&c.kronecker(&d)));
    }

    #[test]
    fn khatri_rao_of_block_identities() {
        let a = partition(&Matrix::identity(6), 3, 2, 2).unwrap();
        let b = partition(&Matrix::identity(9), 3, 3, 3).unwrap();
        let kr = khatri_rao(&a, &b).unwrap();
        assert_eq!((kr.n(), kr.p(), kr.q()), (3, 6, 6));
        assert_eq!(flatten(&kr), Matrix::identity(18));
        assert_eq!(
            khatri_rao(&a, &partition(&Matrix::identity(4), 2, 2, 2).unwrap()).unwrap_err(),
            Error::BlockGridMismatch { left: 3, right: 2 }
        );
    }

    #[test]
    fn khatri_rao_all_examples() {
        let a = partition(&sample(4, 4, 0.1), 2, 2, 2).unwrap();
        let b = partition(&sample(2, 2, 0.5), 2, 1, 1).unwrap();
        let c = partition(&sample(6, 6, 0.9), 2, 3, 3).unwrap();
        assert_eq!(khatri_rao_all(std::slice::from_ref(&a)).unwrap(), a);
        let left = khatri_rao(&khatri_rao(&a, &b).unwrap(), &c).unwrap();
        let right = khatri_rao(&a, &khatri_rao(&b, &c).unwrap()).unwrap();
        // complex products are associative only up to rounding
        assert!(flatten(&left).max_abs_diff(&flatten(&right)) < 1e-14);
        assert_eq!(khatri_rao_all(&[a.clone(), b.clone(), c.clone()]).unwrap(), left);
        assert_eq!(khatri_rao_all(&[]).unwrap_err(), Error::EmptyFactorList);

        let x = sample(3, 3, 0.3);
        let y = sample(3, 3, 0.6);
        let z = sample(3, 3, 0.8);
        let triple = khatri_rao_all(&[
            BlockMatrix::from_scalar_grid(&x).unwrap(),
            BlockMatrix::from_scalar_grid(&y).unwrap(),
            BlockMatrix::from_scalar_grid(&z).unwrap(),
        ])
        .unwrap();
        assert!(flatten(&triple).bitwise_eq(&x.hadamard(&y).unwrap().hadamard(&z).unwrap()));
    }

    #[test]
    fn leading_block_and_diagonal_block() {
        let a = partition(&sample(6, 6, 0.35), 3, 2, 2).unwrap();
        assert_eq!(leading_block_submatrix(&a, 3).unwrap(), a);
        let one = leading_block_submatrix(&a, 1).unwrap();
        assert_eq!(one.n(), 1);
        assert_eq!(one.block(0, 0), a.block(0, 0));
        assert_eq!(flatten(&leading_block_submatrix(&a, 2).unwrap()), flatten(&a).leading_principal(4).unwrap());
        assert!(leading_block_submatrix(&a, 4).is_err());

        assert_eq!(diagonal_block(&one, 1).unwrap(), a.block(0, 0));
        let eye = partition(&Matrix::identity(6), 3, 2, 2).unwrap();
        assert_eq!(diagonal_block(&eye, 2).unwrap(), &Matrix::identity(2));
        assert!(diagonal_block(&eye, 0).is_err());
    }

    #[test]
    fn leading_block_commutes_with_khatri_rao() {
        let a = partition(&sample(6, 6, 0.15), 3, 2, 2).unwrap();
        let b = partition(&sample(3, 3, 0.75), 3, 1, 1).unwrap();
        for mu in 1..=3 {
            let lhs = leading_block_submatrix(&khatri_rao(&a, &b).unwrap(), mu).unwrap();
            let rhs = khatri_rao(
                &leading_block_submatrix(&a, mu).unwrap(),
                &leading_block_submatrix(&b, mu).unwrap(),
            )
            .unwrap();
            assert!(flatten(&lhs).bitwise_eq(&flatten(&rhs)));
        }
    }

    #[test]
    fn json_shape_is_checked() {
        let a = partition(&Matrix::identity(4), 2, 2, 2).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: BlockMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        let lying = text.replacen("\"n\":2", "\"n\":3", 1);
        assert!(serde_json::from_str::<BlockMatrix>(&lying).is_err());
    }
}
