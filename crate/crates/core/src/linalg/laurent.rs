use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{fmt_rational, Rational, RationalMatrix};
use crate::error::{Error, Result};

/// A Laurent polynomial in one variable `t` with rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * t^exp`
    pub fn monomial(c: Rational, exp: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.coeffs
            .get(&exp)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `Some((c, e))` when the polynomial is the single term `c t^e`.
    pub fn as_monomial(&self) -> Option<(Rational, i64)> {
        if self.coeffs.len() == 1 {
            let (&e, c) = self.coeffs.iter().next()?;
            Some((c.clone(), e))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, exp: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    /// Multiplies by `t^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e + shift, c.clone()))
                .collect(),
        }
    }

    /// Substitutes `t -> 1/t`.
    pub fn invert_variable(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&e, x)| (e, x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at a rational point. Fails at `t = 0` when a negative
    /// exponent is present.
    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if t.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::InvalidParameters(
                "negative power of t evaluated at 0".into(),
            ));
        }
        let mut acc = Rational::zero();
        for (&e, c) in &self.coeffs {
            let p = if e >= 0 {
                num_traits::pow(t.clone(), e as usize)
            } else {
                num_traits::pow(t.recip(), (-e) as usize)
            };
            acc += c * p;
        }
        Ok(acc)
    }

    /// Exact quotient in `Q[t, 1/t]`, or `None` when `divisor` does not
    /// divide `self` (or is zero).
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (Some(da), Some(db)) = (self.min_exp(), divisor.min_exp()) else {
            return if divisor.is_zero() {
                None
            } else {
                Some(Self::zero())
            };
        };
        // Shift both to ordinary polynomials with nonzero constant term; the
        // divisor is then coprime to t, so divisibility in the Laurent ring
        // coincides with polynomial divisibility.
        let mut rem: Vec<Rational> = dense(self, da);
        let b: Vec<Rational> = dense(divisor, db);
        let lead_b = b.last().expect("nonzero divisor").clone();
        let deg_b = b.len() - 1;
        if rem.len() < b.len() {
            return None;
        }
        let mut quot = vec![Rational::zero(); rem.len() - deg_b];
        for d in (deg_b..rem.len()).rev() {
            if rem[d].is_zero() {
                continue;
            }
            let q = &rem[d] / &lead_b;
            for (i, bi) in b.iter().enumerate() {
                if !bi.is_zero() {
                    rem[d - deg_b + i] -= &q * bi;
                }
            }
            quot[d - deg_b] = q;
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(Self::from_terms(
            quot.into_iter()
                .enumerate()
                .map(|(i, c)| (i as i64 + da - db, c)),
        ))
    }
}

fn dense(p: &LaurentPoly, min: i64) -> Vec<Rational> {
    let max = p.max_exp().unwrap_or(min);
    let mut v = vec![Rational::zero(); (max - min + 1) as usize];
    for (e, c) in p.terms() {
        v[(e - min) as usize] = c.clone();
    }
    v
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| match e {
                0 => fmt_rational(c),
                1 => format!("{}*t", fmt_rational(c)),
                _ => format!("{}*t^{}", fmt_rational(c), e),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Matrix of Laurent polynomials, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = LaurentPoly::one();
        }
        m
    }

    pub fn from_diagonal(diag: Vec<LaurentPoly>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            *m.get_mut(i, i) = d;
        }
        m
    }

    /// `diag(t^d_0, t^d_1, ...)`
    pub fn monomial_diagonal(degrees: &[i64]) -> Self {
        Self::from_diagonal(
            degrees
                .iter()
                .map(|&d| LaurentPoly::monomial(Rational::one(), d))
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut LaurentPoly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.entries.iter().filter_map(LaurentPoly::min_exp).min()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.entries.iter().filter_map(LaurentPoly::max_exp).max()
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows on the right", self.cols),
                found: format!("{} rows", rhs.rows),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(l, j);
                    if !b.is_zero() {
                        let p = a * b;
                        let slot = out.get_mut(i, j);
                        *slot = &*slot + &p;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Substitutes `t -> 1/t` in every entry.
    pub fn invert_variable(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(LaurentPoly::invert_variable)
                .collect(),
        }
    }

    pub fn eval(&self, t: &Rational) -> Result<RationalMatrix> {
        let data = self
            .entries
            .iter()
            .map(|p| p.eval(t))
            .collect::<Result<Vec<_>>>()?;
        RationalMatrix::new(self.rows, self.cols, data)
    }

    pub fn determinant(&self) -> Result<LaurentPoly> {
        det_laurent(self)
    }

    /// Inverse over `Q[t, 1/t]` together with the determinant, by
    /// fraction-free Gauss-Jordan elimination on `[M | I]`. Fails with
    /// [`Error::Singular`] unless the determinant is a unit `c t^e`.
    pub fn inverse_with_det(&self) -> Result<(LaurentMatrix, LaurentPoly)> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let width = 2 * n;
        let mut a: Vec<Vec<LaurentPoly>> = (0..n)
            .map(|i| {
                let mut row: Vec<LaurentPoly> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        LaurentPoly::one()
                    } else {
                        LaurentPoly::zero()
                    }
                }));
                row
            })
            .collect();
        let mut prev = LaurentPoly::one();
        let mut negate = false;
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !a[i][c].is_zero())
                .ok_or(Error::Singular)?;
            if p != c {
                a.swap(p, c);
                negate = !negate;
            }
            let pivot_row = a[c].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == c {
                    continue;
                }
                let lead = std::mem::take(&mut row[c]);
                for j in 0..width {
                    if j == c {
                        continue;
                    }
                    let v = &(&pivot_row[c] * &row[j]) - &(&lead * &pivot_row[j]);
                    row[j] = v
                        .exact_div(&prev)
                        .expect("Bareiss-Jordan step divides exactly");
                }
            }
            prev = a[c][c].clone();
        }
        // Every diagonal entry now equals the last pivot, +-det.
        let det = if negate { -&prev } else { prev.clone() };
        if det.as_monomial().is_none() {
            return Err(Error::Singular);
        }
        let mut inv = LaurentMatrix::zeros(n, n);
        for (i, row) in a.iter().enumerate() {
            for j in 0..n {
                *inv.get_mut(i, j) = row[n + j].exact_div(&row[i]).ok_or(Error::Singular)?;
            }
        }
        Ok((inv, det))
    }
}

impl Mul for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.try_mul(rhs).expect("matrix shape mismatch")
    }
}

/// Exact determinant over `Q[t, 1/t]` by fraction-free (Bareiss)
/// elimination; every division is exact in the Laurent ring.
pub fn det_laurent(m: &LaurentMatrix) -> Result<LaurentPoly> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mut a: Vec<Vec<LaurentPoly>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut prev = LaurentPoly::one();
    let mut negate = false;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(LaurentPoly::zero());
        };
        if p != c {
            a.swap(p, c);
            negate = !negate;
        }
        let (top, bottom) = a.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..n {
                let v = &(&pivot_row[c] * &row[j]) - &(&lead * &pivot_row[j]);
                row[j] = v.exact_div(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = a[c][c].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -&det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn t(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(int(1), e)
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = &t(2) - &t(2);
        assert!(p.is_zero());
        assert_eq!(p.terms().count(), 0);
    }

    #[test]
    fn det_of_diagonals() {
        assert_eq!(
            det_laurent(&LaurentMatrix::monomial_diagonal(&[1, -1])).unwrap(),
            LaurentPoly::one()
        );
        assert_eq!(
            det_laurent(&LaurentMatrix::monomial_diagonal(&[2, 2])).unwrap(),
            t(4)
        );
    }

    #[test]
    fn det_upper_triangular_jordan() {
        let m = LaurentMatrix::new(
            2,
            2,
            vec![t(1), LaurentPoly::one(), LaurentPoly::zero(), t(1)],
        )
        .unwrap();
        assert_eq!(det_laurent(&m).unwrap(), t(2));
    }

    #[test]
    fn det_needs_pivoting() {
        // [[0, t], [t^-1 + 1, 3]] -> -(t)(t^-1 + 1) = -1 - t
        let m = LaurentMatrix::new(
            2,
            2,
            vec![
                LaurentPoly::zero(),
                t(1),
                &t(-1) + &LaurentPoly::one(),
                LaurentPoly::constant(int(3)),
            ],
        )
        .unwrap();
        assert_eq!(
            det_laurent(&m).unwrap(),
            LaurentPoly::from_terms([(0, int(-1)), (1, int(-1))])
        );
    }

    #[test]
    fn det_rejects_non_square() {
        assert!(matches!(
            det_laurent(&LaurentMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn inverse_of_unimodular() {
        let m = LaurentMatrix::new(
            3,
            3,
            vec![
                LaurentPoly::zero(),
                t(1),
                LaurentPoly::one(),
                t(-1),
                &t(0) + &t(1),
                LaurentPoly::zero(),
                LaurentPoly::zero(),
                LaurentPoly::zero(),
                t(0).scale(&rat(1, 2)),
            ],
        )
        .unwrap();
        let (inv, det) = m.inverse_with_det().unwrap();
        assert_eq!(det, det_laurent(&m).unwrap());
        assert_eq!(&m * &inv, LaurentMatrix::identity(3));
        assert_eq!(&inv * &m, LaurentMatrix::identity(3));
    }

    #[test]
    fn inverse_requires_unit_determinant() {
        let m = LaurentMatrix::from_diagonal(vec![&t(0) + &t(1), t(1)]);
        assert_eq!(m.inverse_with_det(), Err(Error::Singular));
    }

    #[test]
    fn exact_division() {
        let a = &(&t(-1) + &t(1)) * &(&t(3) - &LaurentPoly::constant(rat(1, 2)));
        let b = &t(-1) + &t(1);
        assert_eq!(
            a.exact_div(&b).unwrap(),
            &t(3) - &LaurentPoly::constant(rat(1, 2))
        );
        assert!(t(2).exact_div(&(&t(0) + &t(1))).is_none());
        assert_eq!(t(2).exact_div(&t(5)).unwrap(), t(-3));
    }

    #[test]
    fn eval_with_negative_powers() {
        let p = &t(-2) + &LaurentPoly::constant(int(3));
        assert_eq!(p.eval(&int(2)).unwrap(), rat(13, 4));
        assert!(p.eval(&int(0)).is_err());
    }
}
