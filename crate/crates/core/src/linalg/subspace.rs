use num_traits::{One, Zero};

use super::{rref, Rational, RationalMatrix};
use crate::error::{Error, Result};

/// A linear subspace of `Q^ambient_dim`, stored canonically as the nonzero
/// rows of a reduced row-echelon matrix. Two subspaces are equal exactly when
/// their stored bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RationalMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: RationalMatrix::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: RationalMatrix::identity(ambient_dim),
        }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &RationalMatrix) -> Self {
        let r = rref(m);
        let keep: Vec<usize> = (0..r.rank).collect();
        let cols: Vec<usize> = (0..m.cols()).collect();
        Self {
            ambient_dim: m.cols(),
            basis: r.matrix.select(&keep, &cols),
        }
    }

    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        let m = RationalMatrix::from_rows_with_cols(vectors, ambient_dim)?;
        Ok(Self::row_space(&m))
    }

    /// Span of a set of standard basis vectors.
    pub fn coordinate(
        ambient_dim: usize,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&i| i >= ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: format!("index < {ambient_dim}"),
                found: format!("index {bad}"),
            });
        }
        let mut m = RationalMatrix::zeros(idx.len(), ambient_dim);
        for (r, &i) in idx.iter().enumerate() {
            m[(r, i)] = Rational::one();
        }
        Ok(Self {
            ambient_dim,
            basis: m,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", self.ambient_dim),
                found: format!("length {}", v.len()),
            });
        }
        let mut rows = self.basis.row_vecs();
        rows.push(v.to_vec());
        let m = RationalMatrix::from_rows_with_cols(rows, self.ambient_dim)?;
        Ok(rref(&m).rank == self.dim())
    }

    /// Whether `action` (a square matrix acting on column vectors) maps the
    /// subspace into itself.
    pub fn is_invariant_under(&self, action: &RationalMatrix) -> Result<bool> {
        if action.rows() != self.ambient_dim || action.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0} matrix", self.ambient_dim),
                found: format!("{}x{}", action.rows(), action.cols()),
            });
        }
        // Images of basis vectors are the rows of basis * action^T.
        let images = self.basis.try_mul(&action.transpose())?;
        let mut rows = self.basis.row_vecs();
        rows.extend(images.row_vecs());
        let m = RationalMatrix::from_rows_with_cols(rows, self.ambient_dim)?;
        Ok(rref(&m).rank == self.dim())
    }
}

/// Null space of `m` as a canonical subspace of `Q^cols(m)`.
pub fn kernel_basis(m: &RationalMatrix) -> Subspace {
    let r = rref(m);
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &c in &r.pivots {
        is_pivot[c] = true;
    }
    let vectors: Vec<Vec<Rational>> = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &pc) in r.pivots.iter().enumerate() {
                v[pc] = -r.matrix[(row, f)].clone();
            }
            v
        })
        .collect();
    Subspace::span(n, vectors).expect("kernel vectors have ambient length")
}

/// Equality of spans, by comparison of canonical bases.
pub fn subspace_equal(a: &Subspace, b: &Subspace) -> Result<bool> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: format!("ambient dimension {}", a.ambient_dim),
            found: format!("ambient dimension {}", b.ambient_dim),
        });
    }
    Ok(a.basis == b.basis)
}
