use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[Rational]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Builds a matrix from a list of rows. All rows must have equal length.
    /// An empty list gives a `0 x cols` matrix with `cols = 0`.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: format!("row of length {cols}"),
                    found: format!("row of length {}", r.len()),
                });
            }
            data.extend(r);
        }
        Ok(Self {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor from integer rows, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&v| Rational::from_integer(BigInt::from(v))));
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// The submatrix on the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self[(i, j)].clone());
            }
        }
        Self {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// Matrix product. Zero entries on either side are skipped, so products
    /// with sparse operators cost proportionally to their nonzeros.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows on the right", self.cols),
                found: format!("{} rows", rhs.rows),
            });
        }
        let rhs_nz: Vec<Vec<usize>> = (0..rhs.rows)
            .map(|l| (0..rhs.cols).filter(|&j| !rhs[(l, j)].is_zero()).collect())
            .collect();
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for &j in &rhs_nz[l] {
                    let prod = a * &rhs[(l, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", self.cols),
                found: format!("length {}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        let (int_rows, scales) = self.integer_rows();
        let ech = bareiss_echelon(int_rows, self.cols);
        if ech.pivots.len() < self.rows {
            return Ok(Rational::zero());
        }
        let last = ech.rows[self.rows - 1][self.cols - 1].clone();
        let mut det = Rational::from_integer(last);
        if ech.swaps % 2 == 1 {
            det = -det;
        }
        let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        Ok(det / Rational::from_integer(scale))
    }

    /// Exact inverse via reduction of `[A | I]`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let r = rref(&aug);
        if r.pivots.len() < n || r.pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(r.matrix.select(&rows, &cols))
    }

    /// Each row multiplied by the lcm of its denominators, returned together
    /// with those multipliers.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = self.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            rows.push(row.iter().map(|q| q.numer() * (&l / q.denom())).collect());
            scales.push(l);
        }
        (rows, scales)
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    /// Panics on a shape mismatch; use [`RationalMatrix::try_mul`] otherwise.
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.try_mul(rhs).expect("matrix shape mismatch")
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(super::fmt_rational).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

/// Fraction-free (Bareiss) forward elimination over the integers. Pivots are
/// the first nonzero entry in column order. After processing `r` pivots every
/// remaining entry is an `(r+1)`-minor of the input, so the division by the
/// previous pivot is exact.
fn bareiss_echelon(mut a: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() {
                    v
                } else {
                    debug_assert!((&v % &prev).is_zero(), "inexact Bareiss division");
                    v / &prev
                };
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows: a,
        pivots,
        swaps,
    }
}

/// The unique reduced row-echelon form of `m`.
///
/// Rows are first cleared of denominators, reduced fraction-free, then
/// normalized (pivots 1, zeros above) in a final rational pass.
pub fn rref(m: &RationalMatrix) -> Rref {
    let (int_rows, _) = m.integer_rows();
    let ech = bareiss_echelon(int_rows, m.cols);
    let rank = ech.pivots.len();
    let mut out: Vec<Vec<Rational>> = Vec::with_capacity(m.rows);
    for (r, &c) in ech.pivots.iter().enumerate() {
        let row = &ech.rows[r];
        let mut g = row[c..].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if row[c].is_negative() {
            g = -g;
        }
        let pivot = Rational::from_integer(&row[c] / &g);
        out.push(
            row.iter()
                .map(|x| {
                    if x.is_zero() {
                        Rational::zero()
                    } else {
                        Rational::from_integer(x / &g) / &pivot
                    }
                })
                .collect(),
        );
    }
    // Back-substitution from the last pivot upward.
    for r in (0..rank).rev() {
        let c = ech.pivots[r];
        let (above, rest) = out.split_at_mut(r);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..m.cols {
                if !pivot_row[j].is_zero() {
                    let d = &f * &pivot_row[j];
                    row[j] -= d;
                }
            }
        }
    }
    out.resize(m.rows, vec![Rational::zero(); m.cols]);
    let matrix = RationalMatrix::from_rows_with_cols(out, m.cols).expect("row lengths agree");
    Rref {
        matrix,
        pivots: ech.pivots,
        rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn rref_proportional_rows() {
        let r = rref(&RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.matrix, RationalMatrix::from_i64(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_identity_is_fixed() {
        let id = RationalMatrix::identity(3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_scales_pivot_rows() {
        let r = rref(&RationalMatrix::from_i64(&[&[2, 0, 0], &[0, 1, 0]]));
        assert_eq!(
            r.matrix,
            RationalMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]])
        );
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_with_fractions_and_skipped_columns() {
        let m = RationalMatrix::new(
            3,
            4,
            vec![
                rat(0, 1),
                rat(1, 2),
                rat(1, 3),
                rat(1, 1),
                rat(0, 1),
                rat(1, 1),
                rat(2, 3),
                rat(2, 1),
                rat(0, 1),
                rat(0, 1),
                rat(1, 5),
                rat(-1, 7),
            ],
        )
        .unwrap();
        let r = rref(&m);
        assert_eq!(r.pivots, vec![1, 2]);
        // row 2 of the input is twice row 1, row 3 independent.
        assert_eq!(
            r.matrix.row(0),
            &[rat(0, 1), rat(1, 1), rat(0, 1), rat(2, 1) + rat(10, 21)]
        );
        assert_eq!(
            r.matrix.row(1),
            &[rat(0, 1), rat(0, 1), rat(1, 1), rat(-5, 7)]
        );
    }

    #[test]
    fn determinant_and_inverse() {
        let m = RationalMatrix::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant().unwrap(), rat(1, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(inv, RationalMatrix::from_i64(&[&[4, -1], &[-7, 2]]));
        assert_eq!(&m * &inv, RationalMatrix::identity(2));

        let p = RationalMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]);
        assert_eq!(p.determinant().unwrap(), rat(-3, 1));
        let half =
            RationalMatrix::new(2, 2, vec![rat(1, 2), rat(0, 1), rat(5, 1), rat(2, 3)]).unwrap();
        assert_eq!(half.determinant().unwrap(), rat(1, 3));
    }

    #[test]
    fn singular_inverse_fails() {
        let m = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.inverse(), Err(Error::Singular));
        assert_eq!(m.determinant().unwrap(), rat(0, 1));
    }

    #[test]
    fn shape_errors() {
        let a = RationalMatrix::zeros(2, 3);
        assert!(a.try_mul(&a).is_err());
        assert!(matches!(a.determinant(), Err(Error::NotSquare { .. })));
        assert!(RationalMatrix::new(2, 2, vec![rat(1, 1)]).is_err());
    }
}
