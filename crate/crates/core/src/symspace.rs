//! Monomial bases of symmetric powers `S^n(V*)` in the coordinates
//! `x_0, ..., x_N`, partial derivatives, and the subspace
//! `m^{k+1} S^{n-(k+1)}(V*)` spanned by monomials of low `x_0`-degree.
//!
//! Monomials of a fixed degree are ordered lexicographically with
//! `x_0 > x_1 > ... > x_N`, largest first: for `N = 1, n = 2` the basis is
//! `x0^2, x0*x1, x1^2`. Under this order the monomials with small
//! `x_0`-exponent form a contiguous suffix.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::linalg::{Rational, Subspace};

/// Exact binomial coefficient by Pascal's rule.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as usize;
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for i in 1..=n as usize {
        for j in (1..=k.min(i)).rev() {
            row[j] = row[j].checked_add(row[j - 1]).expect("binomial overflow");
        }
    }
    row[k]
}

/// Exponent vector of a monomial `x_0^{p_0} ... x_N^{p_N}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0)
            .map(|(i, &p)| {
                if p == 1 {
                    format!("x{i}")
                } else {
                    format!("x{i}^{p}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All monomials of degree `n` in `num_vars` variables, in descending lex
/// order, with a reverse index.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    num_vars: usize,
    degree: u32,
    monomials: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
}

impl PartialEq for MonomialBasis {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars && self.degree == other.degree
    }
}

impl Eq for MonomialBasis {}

impl MonomialBasis {
    /// Basis of `S^degree` of a space with `num_vars` coordinates.
    pub fn new(num_vars: usize, degree: u32) -> Self {
        let mut monomials = Vec::new();
        let mut current = vec![0u32; num_vars];
        enumerate_lex(&mut current, 0, degree, &mut monomials);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Self {
            num_vars,
            degree,
            monomials,
            index,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &MultiIndex {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &MultiIndex) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn index_of_exponents(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(&MultiIndex(exps.to_vec())).copied()
    }
}

fn enumerate_lex(current: &mut Vec<u32>, var: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if current.is_empty() {
        return;
    }
    if var + 1 == current.len() {
        current[var] = remaining;
        out.push(MultiIndex(current.clone()));
        current[var] = 0;
        return;
    }
    for p in (0..=remaining).rev() {
        current[var] = p;
        enumerate_lex(current, var + 1, remaining - p, out);
    }
    current[var] = 0;
}

/// Basis of `S^n(V*)` for `dim V = N + 1`.
pub fn monomial_basis(big_n: usize, n: u32) -> MonomialBasis {
    MonomialBasis::new(big_n + 1, n)
}

/// `dim S^n(V*)` for `dim V = N + 1`, computed as
/// `sum_{i=0}^{n} C(i+N-1, N-1)` and cross-checked against `C(n+N, N)`.
pub fn dim_sym(big_n: usize, n: u32) -> usize {
    let big = big_n as u64;
    let summed: u64 = (0..=n as u64).map(|i| binomial(i + big - 1, big - 1)).sum();
    let closed = binomial(n as u64 + big, big);
    assert_eq!(
        summed, closed,
        "hockey-stick identity failed for N={big_n}, n={n}"
    );
    closed as usize
}

pub(crate) fn check_theorem_range(big_n: usize, n: u32, k: u32) -> Result<()> {
    if big_n < 1 {
        return Err(invalid(format!("N must be at least 1, got {big_n}")));
    }
    if k < 1 || k >= n {
        return Err(invalid(format!("requires 1 <= k < n, got k={k}, n={n}")));
    }
    Ok(())
}

/// Basis indices of degree-`n` monomials with `x_0`-exponent below `n - k`.
pub fn m_power_indices(basis: &MonomialBasis, k: u32) -> Vec<usize> {
    let n = basis.degree();
    (0..basis.len())
        .filter(|&i| basis.monomial(i).exponents()[0] + k < n)
        .collect()
}

/// The subspace `m^{k+1} S^{n-(k+1)}(V*)` of `S^n(V*)`: the span of the
/// monomials whose `x_0`-exponent is at most `n - k - 1`.
pub fn m_power_subspace(big_n: usize, n: u32, k: u32) -> Result<Subspace> {
    check_theorem_range(big_n, n, k)?;
    let basis = monomial_basis(big_n, n);
    Subspace::coordinate(basis.len(), m_power_indices(&basis, k))
}

/// Checks that `dim S^n(V*) - dim m^{k+1}S^{n-(k+1)}(V*) = C(k+N, N)` three
/// ways: with the partial-sum formulas, with closed binomials, and by
/// counting explicit basis monomials.
pub fn lemma1_identity(big_n: usize, n: u32, k: u32) -> Result<bool> {
    check_theorem_range(big_n, n, k)?;
    let big = big_n as u64;
    let (n, k) = (n as u64, k as u64);
    let rank = binomial(k + big, big);

    let term = |i: u64| binomial(i + big - 1, big - 1);
    let sym_sum: u64 = (0..=n).map(term).sum();
    let sub_sum: u64 = (k + 1..=n).map(term).sum();
    let low_sum: u64 = (0..=k).map(term).sum();
    let by_sums = sym_sum - sub_sum == rank && low_sum == rank;

    // dim of the kernel = C(n+N, N) - C(k+N, N) written as a closed form.
    let by_closed = binomial(n + big, big) - binomial(k + big, big) == sub_sum;

    let basis = monomial_basis(big_n, n as u32);
    let explicit_sub = m_power_indices(&basis, k as u32).len() as u64;
    let explicit_low = basis
        .monomials()
        .iter()
        .filter(|m| m.exponents()[0] as u64 >= n - k)
        .count() as u64;
    let by_count = basis.len() as u64 - explicit_sub == rank
        && explicit_low == rank
        && explicit_sub == sub_sum;

    Ok(by_sums && by_closed && by_count)
}

/// An element of `S^n(V*)`: coefficients aligned with a shared basis.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyVector {
    basis: Arc<MonomialBasis>,
    coeffs: Vec<Rational>,
}

impl PolyVector {
    pub fn new(basis: Arc<MonomialBasis>, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} coefficients", basis.len()),
                found: format!("{}", coeffs.len()),
            });
        }
        Ok(Self { basis, coeffs })
    }

    pub fn zero(basis: Arc<MonomialBasis>) -> Self {
        let coeffs = vec![Rational::zero(); basis.len()];
        Self { basis, coeffs }
    }

    /// `c * x^exps`.
    pub fn monomial(basis: Arc<MonomialBasis>, exps: &[u32], c: Rational) -> Result<Self> {
        let i = basis
            .index_of_exponents(exps)
            .ok_or_else(|| invalid(format!("{exps:?} is not a monomial of this basis")))?;
        let mut v = Self::zero(basis);
        v.coeffs[i] = c;
        Ok(v)
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if *self.basis != *other.basis {
            return Err(Error::DimensionMismatch {
                expected: format!(
                    "degree {} in {} variables",
                    self.degree(),
                    self.basis.num_vars()
                ),
                found: format!(
                    "degree {} in {} variables",
                    other.degree(),
                    other.basis.num_vars()
                ),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            basis: self.basis.clone(),
            coeffs,
        })
    }
}

impl fmt::Debug for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                format!(
                    "{}*{}",
                    crate::linalg::fmt_rational(c),
                    self.basis.monomial(i)
                )
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// `d f / d x_var`, expressed in the basis one degree lower.
pub fn partial_derivative(f: &PolyVector, var: usize) -> Result<PolyVector> {
    let basis = f.basis();
    if var >= basis.num_vars() {
        return Err(invalid(format!(
            "variable x{var} out of range for {} variables",
            basis.num_vars()
        )));
    }
    if basis.degree() == 0 {
        return Err(invalid("cannot differentiate in degree 0"));
    }
    let target = Arc::new(MonomialBasis::new(basis.num_vars(), basis.degree() - 1));
    let mut out = PolyVector::zero(target.clone());
    let mut exps = vec![0u32; basis.num_vars()];
    for (i, c) in f.coeffs().iter().enumerate() {
        let p = basis.monomial(i).exponents();
        if c.is_zero() || p[var] == 0 {
            continue;
        }
        exps.copy_from_slice(p);
        exps[var] -= 1;
        let j = target
            .index_of_exponents(&exps)
            .expect("lowered monomial is in the basis");
        out.coeffs[j] += c * Rational::from_integer(BigInt::from(p[var]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, subspace_equal};

    fn exps(b: &MonomialBasis) -> Vec<Vec<u32>> {
        b.monomials()
            .iter()
            .map(|m| m.exponents().to_vec())
            .collect()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(40, 20), 137_846_528_820);
    }

    #[test]
    fn basis_order_matches_lex() {
        assert_eq!(
            exps(&monomial_basis(1, 2)),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(
            exps(&monomial_basis(2, 1)),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
        let b = monomial_basis(2, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(
            exps(&b),
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        assert_eq!(monomial_basis(3, 0).len(), 1);
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim_sym(2, 2), 6);
        assert_eq!(dim_sym(1, 3), 4);
        assert_eq!(dim_sym(3, 4), 35);
    }

    #[test]
    fn m_power_examples() {
        let s = m_power_subspace(1, 2, 1).unwrap();
        assert_eq!(s, Subspace::coordinate(3, [2]).unwrap());
        let s = m_power_subspace(1, 3, 1).unwrap();
        // x0*x1^2 and x1^3 are the last two basis monomials.
        assert_eq!(s, Subspace::coordinate(4, [2, 3]).unwrap());
        let s = m_power_subspace(2, 2, 1).unwrap();
        assert_eq!(s.dim(), 3);
        assert!(subspace_equal(&s, &Subspace::coordinate(6, [3, 4, 5]).unwrap()).unwrap());
    }

    #[test]
    fn m_power_rejects_bad_range() {
        assert!(m_power_subspace(1, 2, 2).is_err());
        assert!(m_power_subspace(1, 2, 0).is_err());
        assert!(m_power_subspace(0, 3, 1).is_err());
    }

    #[test]
    fn lemma1_examples() {
        assert!(lemma1_identity(1, 3, 1).unwrap());
        assert!(lemma1_identity(2, 2, 1).unwrap());
        assert!(lemma1_identity(3, 5, 2).unwrap());
        assert_eq!(dim_sym(3, 5) - m_power_subspace(3, 5, 2).unwrap().dim(), 10);
        assert_eq!(dim_sym(3, 5), 56);
    }

    #[test]
    fn derivative_examples() {
        let b2 = Arc::new(monomial_basis(1, 2));
        let b1 = Arc::new(monomial_basis(1, 1));
        let x0sq = PolyVector::monomial(b2.clone(), &[2, 0], int(1)).unwrap();
        assert_eq!(
            partial_derivative(&x0sq, 0).unwrap(),
            PolyVector::monomial(b1.clone(), &[1, 0], int(2)).unwrap()
        );
        let x1sq = PolyVector::monomial(b2.clone(), &[0, 2], int(1)).unwrap();
        assert!(partial_derivative(&x1sq, 0).unwrap().is_zero());
        let x0x1 = PolyVector::monomial(b2.clone(), &[1, 1], int(1)).unwrap();
        assert_eq!(
            partial_derivative(&x0x1, 0).unwrap(),
            PolyVector::monomial(b1, &[0, 1], int(1)).unwrap()
        );
        assert!(partial_derivative(&PolyVector::zero(b2.clone()), 1)
            .unwrap()
            .is_zero());
        assert!(partial_derivative(&x0sq, 2).is_err());
    }
}
