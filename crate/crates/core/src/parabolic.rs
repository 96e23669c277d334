//! `SL(V)` and the parabolic subgroup `P` stabilizing the line through `e_0`,
//! acting on `V*`, on its symmetric powers, and on
//! `S^{n-k}(L*) (x) S^k(V*)`.
//!
//! The group acts on functions by `(g.f)(v) = f(g^{-1} v)`, so `x_i` is sent
//! to the linear form given by row `i` of `g^{-1}`. Action matrices act on
//! coefficient column vectors: column `j` holds the image of basis element
//! `j`. With this convention `g -> action(g)` is a homomorphism and the
//! quotient line `V*/m` is scaled by `a^{-1}`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::linalg::{fmt_rational, Rational, RationalMatrix};
use crate::symspace::{check_theorem_range, MonomialBasis, PolyVector};

/// Default bound on random matrix entries.
pub const DEFAULT_HEIGHT: u32 = 3;

/// An element of `SL(N+1)` over the rationals. When its first column is
/// `(a, 0, ..., 0)` it lies in `P` and `a` is recorded.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupElement {
    mat: RationalMatrix,
    parabolic_scalar: Option<Rational>,
}

impl GroupElement {
    /// Accepts any square matrix of determinant 1.
    pub fn new(mat: RationalMatrix) -> Result<Self> {
        if !mat.is_square() || mat.rows() < 2 {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        if !mat.determinant()?.is_one() {
            return Err(Error::NotUnimodular);
        }
        Ok(Self::from_unimodular(mat))
    }

    /// Like [`GroupElement::new`] but also requires membership in `P`.
    pub fn parabolic(mat: RationalMatrix) -> Result<Self> {
        let g = Self::new(mat)?;
        if g.is_parabolic() {
            Ok(g)
        } else {
            Err(Error::NotParabolic)
        }
    }

    fn from_unimodular(mat: RationalMatrix) -> Self {
        let parabolic = (1..mat.rows()).all(|i| mat[(i, 0)].is_zero());
        let parabolic_scalar = parabolic.then(|| mat[(0, 0)].clone());
        Self {
            mat,
            parabolic_scalar,
        }
    }

    pub fn identity(big_n: usize) -> Self {
        Self::from_unimodular(RationalMatrix::identity(big_n + 1))
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.mat
    }

    /// `N`, so the matrix is `(N+1) x (N+1)`.
    pub fn big_n(&self) -> usize {
        self.mat.rows() - 1
    }

    pub fn is_parabolic(&self) -> bool {
        self.parabolic_scalar.is_some()
    }

    /// The entry `a` of a parabolic element.
    pub fn parabolic_scalar(&self) -> Option<&Rational> {
        self.parabolic_scalar.as_ref()
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_unimodular(self.mat.try_mul(&other.mat)?))
    }

    pub fn inverse(&self) -> Self {
        let inv = self
            .mat
            .inverse()
            .expect("determinant-1 matrices are invertible");
        Self::from_unimodular(inv)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.parabolic_scalar {
            Some(a) => write!(f, "GroupElement(a = {}) {:?}", fmt_rational(a), self.mat),
            None => write!(f, "GroupElement {:?}", self.mat),
        }
    }
}

fn small_int(rng: &mut ChaCha8Rng, height: u32) -> Rational {
    let h = height as i64;
    Rational::from_integer(BigInt::from(rng.gen_range(-h..=h)))
}

/// A seeded random element of `P`.
///
/// `a` is a nonzero integer of magnitude at most `height` or its
/// reciprocal; the first row is random integers in `[-height, height]`; the
/// lower-right block is a product of random elementary integer matrices with
/// one row scaled by `a^{-1}`, so the determinant is exactly 1.
pub fn random_parabolic(big_n: usize, seed: i64, height: u32) -> Result<GroupElement> {
    if big_n < 1 {
        return Err(invalid("N must be at least 1"));
    }
    if height < 1 {
        return Err(invalid("height must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let magnitude = rng.gen_range(1..=height as i64);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut a = Rational::from_integer(BigInt::from(sign * magnitude));
    if rng.gen_bool(0.5) {
        a = a.recip();
    }

    let size = big_n + 1;
    let mut mat = RationalMatrix::zeros(size, size);
    mat[(0, 0)] = a.clone();
    for j in 1..size {
        mat[(0, j)] = small_int(&mut rng, height);
    }

    let mut block = RationalMatrix::identity(big_n);
    if big_n >= 2 {
        for _ in 0..2 * big_n {
            let i = rng.gen_range(0..big_n);
            let mut j = rng.gen_range(0..big_n - 1);
            if j >= i {
                j += 1;
            }
            let c = small_int(&mut rng, height);
            // block <- block * (I + c E_ij): column j += c * column i
            for r in 0..big_n {
                let add = &block[(r, i)] * &c;
                block[(r, j)] += add;
            }
        }
    }
    let scaled_row = rng.gen_range(0..big_n);
    let a_inv = a.recip();
    for c in 0..big_n {
        block[(scaled_row, c)] = &block[(scaled_row, c)] * &a_inv;
    }
    for r in 0..big_n {
        for c in 0..big_n {
            mat[(r + 1, c + 1)] = block[(r, c)].clone();
        }
    }
    debug_assert!(mat.determinant().map(|d| d.is_one()).unwrap_or(false));
    Ok(GroupElement {
        mat,
        parabolic_scalar: Some(a),
    })
}

/// Independent per-trial seeds derived from a master seed, so trials can be
/// evaluated in any order.
pub fn trial_seeds(seed: i64, trials: usize) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64 ^ 0x9E37_79B9_7F4A_7C15);
    (0..trials).map(|_| rng.gen::<i64>()).collect()
}

/// `g^{-1}`: row `i` is the linear form substituted for `x_i`.
pub fn substitution_matrix(g: &GroupElement) -> RationalMatrix {
    g.inverse().mat
}

/// Matrix of the action on `V*` in the basis `x_0, ..., x_N`, acting on
/// coefficient columns; equal to `(g^{-1})^T`.
pub fn dual_action_matrix(g: &GroupElement) -> RationalMatrix {
    substitution_matrix(g).transpose()
}

/// For each monomial of degree `d`, the basis index of `monomial * x_j`.
fn multiplication_table(lower: &MonomialBasis, upper: &MonomialBasis) -> Vec<Vec<usize>> {
    let vars = lower.num_vars();
    let mut exps = vec![0u32; vars];
    lower
        .monomials()
        .iter()
        .map(|m| {
            (0..vars)
                .map(|j| {
                    exps.copy_from_slice(m.exponents());
                    exps[j] += 1;
                    upper
                        .index_of_exponents(&exps)
                        .expect("raised monomial is in the basis")
                })
                .collect()
        })
        .collect()
}

/// Action matrices of `g` on `S^d(V*)` for every `d` in `0..=max_degree`,
/// built degree by degree: the image of `x^p` is the image of `x^{p - e_i}`
/// times the substituted linear form for `x_i`.
pub fn sym_actions_upto(g: &GroupElement, max_degree: u32) -> Vec<RationalMatrix> {
    let vars = g.big_n() + 1;
    let subst = substitution_matrix(g);
    let forms: Vec<Vec<(usize, Rational)>> = (0..vars)
        .map(|i| {
            (0..vars)
                .filter(|&j| !subst[(i, j)].is_zero())
                .map(|j| (j, subst[(i, j)].clone()))
                .collect()
        })
        .collect();

    let mut out = vec![RationalMatrix::identity(1)];
    let mut lower = MonomialBasis::new(vars, 0);
    // Images of the current-degree monomials, one dense column each.
    let mut images: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for d in 1..=max_degree {
        let upper = MonomialBasis::new(vars, d);
        let table = multiplication_table(&lower, &upper);
        let mut next: Vec<Vec<Rational>> = Vec::with_capacity(upper.len());
        for m in upper.monomials() {
            let p = m.exponents();
            let i = p.iter().position(|&e| e > 0).expect("positive degree");
            let mut q = p.to_vec();
            q[i] -= 1;
            let src = &images[lower.index_of_exponents(&q).expect("lowered monomial")];
            let mut col = vec![Rational::zero(); upper.len()];
            for (qi, c) in src.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (j, s) in &forms[i] {
                    col[table[qi][*j]] += c * s;
                }
            }
            next.push(col);
        }
        let n = upper.len();
        let mut mat = RationalMatrix::zeros(n, n);
        for (j, col) in next.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    mat[(i, j)] = v.clone();
                }
            }
        }
        out.push(mat);
        images = next;
        lower = upper;
    }
    out
}

/// Matrix of the action of `g` on `S^n(V*)` in the monomial basis.
pub fn sym_action(g: &GroupElement, n: u32) -> RationalMatrix {
    sym_actions_upto(g, n).pop().expect("at least degree 0")
}

/// `g . f` for `f` in `S^n(V*)`.
pub fn act_on(g: &GroupElement, f: &PolyVector) -> Result<PolyVector> {
    if f.basis().num_vars() != g.big_n() + 1 {
        return Err(Error::DimensionMismatch {
            expected: format!("{} variables", g.big_n() + 1),
            found: format!("{} variables", f.basis().num_vars()),
        });
    }
    let m = sym_action(g, f.degree());
    PolyVector::new(f.basis().clone(), m.apply(f.coeffs())?)
}

/// The character `chi(g) = a^{-n}` of `S^n(L*)`.
pub fn chi(g: &GroupElement, n: u32) -> Result<Rational> {
    let a = g.parabolic_scalar().ok_or(Error::NotParabolic)?;
    Ok(num_traits::pow(a.recip(), n as usize))
}

/// Action on `S^{n-k}(L*) (x) S^k(V*)` in the basis
/// `xbar_0^{n-k} (x) (degree-k monomials)`.
pub fn target_rep_action(g: &GroupElement, n: u32, k: u32) -> Result<RationalMatrix> {
    check_theorem_range(g.big_n(), n, k)?;
    let c = chi(g, n - k)?;
    Ok(sym_action(g, k).scale(&c))
}

type ActionFn = dyn Fn(&GroupElement) -> Result<RationalMatrix> + Send + Sync;

/// A finite-dimensional representation, given by its action matrices.
#[derive(Clone)]
pub struct RepAction {
    dim: usize,
    action: Arc<ActionFn>,
}

impl RepAction {
    pub fn new(
        dim: usize,
        action: impl Fn(&GroupElement) -> Result<RationalMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            action: Arc::new(action),
        }
    }

    /// `S^n(V*)` for `dim V = N + 1`.
    pub fn symmetric_power(big_n: usize, n: u32) -> Self {
        let dim = crate::symspace::dim_sym(big_n, n);
        Self::new(dim, move |g| Ok(sym_action(g, n)))
    }

    /// `S^{n-k}(L*) (x) S^k(V*)`.
    pub fn target(big_n: usize, n: u32, k: u32) -> Self {
        let dim = crate::symspace::dim_sym(big_n, k);
        Self::new(dim, move |g| target_rep_action(g, n, k))
    }

    /// The character `S^n(L*)`.
    pub fn character(n: u32) -> Self {
        Self::new(1, move |g| Ok(RationalMatrix::from_diagonal(&[chi(g, n)?])))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, g: &GroupElement) -> Result<RationalMatrix> {
        let m = (self.action)(g)?;
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0} action matrix", self.dim),
                found: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        Ok(m)
    }
}

impl fmt::Debug for RepAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RepAction(dim = {})", self.dim)
    }
}

/// `m * src == dst * m`, exactly.
pub fn intertwines(m: &RationalMatrix, src: &RationalMatrix, dst: &RationalMatrix) -> Result<bool> {
    Ok(m.try_mul(src)? == dst.try_mul(m)?)
}

/// Whether `m: src -> dst` commutes with the action of `g`.
pub fn is_equivariant(
    m: &RationalMatrix,
    src: &RepAction,
    dst: &RepAction,
    g: &GroupElement,
) -> Result<bool> {
    if m.cols() != src.dim() || m.rows() != dst.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{} map", dst.dim(), src.dim()),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    intertwines(m, &src.action(g)?, &dst.action(g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn diag_two() -> GroupElement {
        GroupElement::parabolic(
            RationalMatrix::new(2, 2, vec![int(2), int(0), int(0), rat(1, 2)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn random_elements_are_parabolic_and_unimodular() {
        for big_n in 1..=4 {
            for seed in 0..20 {
                let g = random_parabolic(big_n, seed, 3).unwrap();
                assert!(g.matrix().determinant().unwrap().is_one());
                for i in 1..=big_n {
                    assert!(g.matrix()[(i, 0)].is_zero());
                }
                assert_eq!(g.parabolic_scalar(), Some(&g.matrix()[(0, 0)]));
            }
        }
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(
            random_parabolic(3, 42, 3).unwrap(),
            random_parabolic(3, 42, 3).unwrap()
        );
        assert_ne!(
            random_parabolic(3, 42, 3).unwrap(),
            random_parabolic(3, 43, 3).unwrap()
        );
    }

    #[test]
    fn random_rank_one_shape() {
        for seed in 0..50 {
            let g = random_parabolic(1, seed, 3).unwrap();
            let a = g.parabolic_scalar().unwrap().clone();
            assert_eq!(g.matrix()[(1, 1)], a.recip());
            assert!(g.matrix()[(0, 1)].is_integer());
        }
    }

    #[test]
    fn constructors_validate() {
        assert_eq!(
            GroupElement::new(RationalMatrix::from_i64(&[&[2, 0], &[0, 1]])),
            Err(Error::NotUnimodular)
        );
        assert_eq!(
            GroupElement::parabolic(RationalMatrix::from_i64(&[&[1, 0], &[1, 1]])),
            Err(Error::NotParabolic)
        );
        assert!(
            !GroupElement::new(RationalMatrix::from_i64(&[&[1, 0], &[1, 1]]))
                .unwrap()
                .is_parabolic()
        );
    }

    #[test]
    fn dual_action_examples() {
        assert_eq!(
            dual_action_matrix(&GroupElement::identity(3)),
            RationalMatrix::identity(4)
        );
        let d = dual_action_matrix(&diag_two());
        assert_eq!(d, RationalMatrix::from_diagonal(&[rat(1, 2), int(2)]));
        let g = random_parabolic(3, 5, 3).unwrap();
        let s = substitution_matrix(&g);
        let d = dual_action_matrix(&g);
        for i in 1..4 {
            assert!(s[(i, 0)].is_zero());
            assert!(d[(0, i)].is_zero());
        }
    }

    #[test]
    fn sym_action_examples() {
        assert_eq!(
            sym_action(&GroupElement::identity(2), 3),
            RationalMatrix::identity(10)
        );
        let g = random_parabolic(2, 11, 3).unwrap();
        assert_eq!(sym_action(&g, 1), dual_action_matrix(&g));
        assert_eq!(
            sym_action(&diag_two(), 2),
            RationalMatrix::from_diagonal(&[rat(1, 4), int(1), int(4)])
        );
    }

    #[test]
    fn sym_action_by_hand_shear() {
        // g = [[1, 1], [0, 1]], g^{-1} = [[1, -1], [0, 1]]: x0 -> x0 - x1, x1 -> x1.
        let g = GroupElement::parabolic(RationalMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        // x0^2 -> x0^2 - 2 x0 x1 + x1^2; x0 x1 -> x0 x1 - x1^2; x1^2 -> x1^2
        let expected = RationalMatrix::from_i64(&[&[1, 0, 0], &[-2, 1, 0], &[1, -1, 1]]);
        assert_eq!(sym_action(&g, 2), expected);
    }

    #[test]
    fn chi_examples() {
        let g = diag_two();
        assert_eq!(chi(&g, 3).unwrap(), rat(1, 8));
        assert_eq!(chi(&GroupElement::identity(2), 7).unwrap(), int(1));
        let third = GroupElement::parabolic(
            RationalMatrix::new(2, 2, vec![rat(1, 3), int(5), int(0), int(3)]).unwrap(),
        )
        .unwrap();
        assert_eq!(chi(&third, 2).unwrap(), int(9));
        let not_p = GroupElement::new(RationalMatrix::from_i64(&[&[1, 0], &[1, 1]])).unwrap();
        assert_eq!(chi(&not_p, 1), Err(Error::NotParabolic));
    }

    #[test]
    fn target_action_examples() {
        assert_eq!(
            target_rep_action(&GroupElement::identity(1), 3, 1).unwrap(),
            RationalMatrix::identity(2)
        );
        assert_eq!(
            target_rep_action(&diag_two(), 2, 1).unwrap(),
            RationalMatrix::from_diagonal(&[rat(1, 4), int(1)])
        );
        let g = random_parabolic(3, 1, 3).unwrap();
        assert_eq!(target_rep_action(&g, 5, 2).unwrap().rows(), 10);
        assert!(target_rep_action(&g, 2, 2).is_err());
    }

    #[test]
    fn equivariance_trivial_cases() {
        let src = RepAction::symmetric_power(2, 2);
        let g = random_parabolic(2, 3, 3).unwrap();
        assert!(is_equivariant(&RationalMatrix::identity(6), &src, &src, &g).unwrap());
        assert!(is_equivariant(&RationalMatrix::zeros(6, 6), &src, &src, &g).unwrap());
        assert!(is_equivariant(&RationalMatrix::zeros(5, 6), &src, &src, &g).is_err());
    }
}
