//! The map `phi(f) = xbar_0^{n-k} (x) d_0^{n-k} f` from `S^n(V*)` onto
//! `S^{n-k}(L*) (x) S^k(V*)`, and two models of the fiber of the principal
//! parts bundle `Pr^k(O(n))` at the base point `[e_0]`:
//!
//! * the quotient `S^n(V*) / ker phi`, and
//! * order-`k` Taylor data of the dehomogenized form `F(1, u_1, ..., u_N)`.
//!
//! Both kernels are compared against `m^{k+1} S^{n-(k+1)}(V*)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{kernel_basis, subspace_equal, Rational, RationalMatrix};
use crate::parabolic::{
    chi, intertwines, random_parabolic, sym_actions_upto, trial_seeds, GroupElement, DEFAULT_HEIGHT,
};
use crate::symspace::{
    binomial, check_theorem_range, dim_sym, m_power_indices, m_power_subspace, monomial_basis,
    partial_derivative, MonomialBasis, MultiIndex, PolyVector,
};

/// Exponents `alpha` of `u_1^{alpha_1} ... u_N^{alpha_N}` with `|alpha| <= k`.
///
/// Ordered through the bijection `alpha <-> (k - |alpha|, alpha)` with the
/// degree-`k` monomials of `S^k(V*)`, so jet coordinates and the target of
/// `phi` share one index set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetBasis {
    big_n: usize,
    order: u32,
    multi_indices: Vec<MultiIndex>,
    homogeneous: MonomialBasis,
}

impl JetBasis {
    pub fn new(big_n: usize, order: u32) -> Self {
        let homogeneous = monomial_basis(big_n, order);
        let multi_indices = homogeneous
            .monomials()
            .iter()
            .map(|m| MultiIndex::new(m.exponents()[1..].to_vec()))
            .collect();
        Self {
            big_n,
            order,
            multi_indices,
            homogeneous,
        }
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.multi_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multi_indices.is_empty()
    }

    pub fn multi_indices(&self) -> &[MultiIndex] {
        &self.multi_indices
    }

    pub fn index_of(&self, alpha: &[u32]) -> Option<usize> {
        let total: u32 = alpha.iter().sum();
        if alpha.len() != self.big_n || total > self.order {
            return None;
        }
        let mut exps = Vec::with_capacity(self.big_n + 1);
        exps.push(self.order - total);
        exps.extend_from_slice(alpha);
        self.homogeneous.index_of_exponents(&exps)
    }
}

fn falling_factorial(p: u32, r: u32) -> BigInt {
    (0..r).fold(BigInt::one(), |acc, i| acc * BigInt::from(p - i))
}

/// Matrix of `f -> d_0^{n-k} f` from the degree-`n` to the degree-`k`
/// monomial basis. The fixed factor `xbar_0^{n-k}` carries no coordinates.
pub fn phi_matrix(big_n: usize, n: u32, k: u32) -> Result<RationalMatrix> {
    check_theorem_range(big_n, n, k)?;
    let src = monomial_basis(big_n, n);
    let dst = monomial_basis(big_n, k);
    let r = n - k;
    let mut m = RationalMatrix::zeros(dst.len(), src.len());
    let mut exps = vec![0u32; big_n + 1];
    for (j, mono) in src.monomials().iter().enumerate() {
        let p = mono.exponents();
        if p[0] < r {
            continue;
        }
        exps.copy_from_slice(p);
        exps[0] -= r;
        let i = dst
            .index_of_exponents(&exps)
            .expect("differentiated monomial has degree k");
        m[(i, j)] = Rational::from_integer(falling_factorial(p[0], r));
    }
    Ok(m)
}

/// Matrix of `F -> (coefficient of u^alpha in F(1, u))_{|alpha| <= k}`.
/// A monomial `x_0^{p_0} x_1^{p_1} ...` goes to the jet coordinate
/// `(p_1, ..., p_N)` when `p_1 + ... + p_N <= k` and to zero otherwise.
pub fn taylor_fiber_matrix(big_n: usize, n: u32, k: u32) -> Result<RationalMatrix> {
    if big_n < 1 {
        return Err(invalid("N must be at least 1"));
    }
    if k > n {
        return Err(invalid(format!("requires k <= n, got k={k}, n={n}")));
    }
    let src = monomial_basis(big_n, n);
    let jets = JetBasis::new(big_n, k);
    let mut m = RationalMatrix::zeros(jets.len(), src.len());
    for (j, mono) in src.monomials().iter().enumerate() {
        if let Some(i) = jets.index_of(&mono.exponents()[1..]) {
            m[(i, j)] = Rational::one();
        }
    }
    Ok(m)
}

/// `ker phi == m^{k+1} S^{n-(k+1)}(V*) == ker(taylor)` as canonical subspaces.
pub fn verify_kernel(big_n: usize, n: u32, k: u32) -> Result<bool> {
    let (phi_ok, taylor_ok) = kernel_checks(big_n, n, k)?;
    Ok(phi_ok && taylor_ok)
}

fn kernel_checks(big_n: usize, n: u32, k: u32) -> Result<(bool, bool)> {
    let sub = m_power_subspace(big_n, n, k)?;
    let ker_phi = kernel_basis(&phi_matrix(big_n, n, k)?);
    let ker_taylor = kernel_basis(&taylor_fiber_matrix(big_n, n, k)?);
    Ok((
        subspace_equal(&ker_phi, &sub)?,
        subspace_equal(&ker_taylor, &sub)?,
    ))
}

/// Exactness of `0 -> m^{k+1}S^{n-(k+1)}(V*) -> S^n(V*) -> fiber -> 0`:
/// dimensions add up and the subspace is exactly the kernel.
pub fn exact_sequence_check(big_n: usize, n: u32, k: u32) -> Result<bool> {
    let sub = m_power_subspace(big_n, n, k)?;
    let phi = phi_matrix(big_n, n, k)?;
    let rank = phi.rank();
    let dims_add = sub.dim() + rank == dim_sym(big_n, n);
    let onto = rank == phi.rows();
    Ok(dims_add && onto && subspace_equal(&kernel_basis(&phi), &sub)?)
}

/// Basis indices of the section `S^n(V*)/ker phi -> S^n(V*)`: monomials with
/// `x_0`-exponent at least `n - k`.
pub fn quotient_section(big_n: usize, n: u32, k: u32) -> Result<Vec<usize>> {
    check_theorem_range(big_n, n, k)?;
    let basis = monomial_basis(big_n, n);
    let kernel: Vec<usize> = m_power_indices(&basis, k);
    Ok((0..basis.len())
        .filter(|i| kernel.binary_search(i).is_err())
        .collect())
}

/// Outcome of checking the identification of the fiber representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub n: u32,
    pub k: u32,
    /// `ker phi` equals the `m`-power subspace.
    pub kernel_matches: bool,
    /// The Taylor fiber map has the same kernel.
    pub taylor_kernel_matches: bool,
    /// `rank phi = rank taylor = C(k+N, N)`.
    pub rank_correct: bool,
    pub equivariance_trials: usize,
    pub equivariance_failures: usize,
    pub quotient_iso_equivariant: bool,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.kernel_matches
            && self.taylor_kernel_matches
            && self.rank_correct
            && self.equivariance_failures == 0
            && self.quotient_iso_equivariant
    }
}

/// Per-trial outcome: `phi` intertwines, and the induced quotient map does.
fn check_trial(
    g: &GroupElement,
    n: u32,
    k: u32,
    phi: &RationalMatrix,
    section: &[usize],
    quotient: &RationalMatrix,
) -> Result<(bool, bool)> {
    let actions = sym_actions_upto(g, n);
    let source = &actions[n as usize];
    let target = actions[k as usize].scale(&chi(g, n - k)?);
    let phi_ok = intertwines(phi, source, &target)?;
    // The kernel is spanned by the non-section monomials and is invariant, so
    // the quotient action is the section block of the source action.
    let quotient_action = source.select(section, section);
    let quotient_ok = intertwines(quotient, &quotient_action, &target)?;
    Ok((phi_ok, quotient_ok))
}

/// Full check at `(N, n, k)` with `trials` random parabolic elements drawn at
/// the default height.
pub fn verify_theorem(
    big_n: usize,
    n: u32,
    k: u32,
    trials: usize,
    seed: i64,
) -> Result<TheoremReport> {
    verify_theorem_with_height(big_n, n, k, trials, seed, DEFAULT_HEIGHT)
}

pub fn verify_theorem_with_height(
    big_n: usize,
    n: u32,
    k: u32,
    trials: usize,
    seed: i64,
    height: u32,
) -> Result<TheoremReport> {
    check_theorem_range(big_n, n, k)?;
    let (kernel_matches, taylor_kernel_matches) = kernel_checks(big_n, n, k)?;
    let phi = phi_matrix(big_n, n, k)?;
    let expected_rank = binomial(k as u64 + big_n as u64, big_n as u64) as usize;
    let rank_correct =
        phi.rank() == expected_rank && taylor_fiber_matrix(big_n, n, k)?.rank() == expected_rank;

    let section = quotient_section(big_n, n, k)?;
    let rows: Vec<usize> = (0..phi.rows()).collect();
    let quotient = phi.select(&rows, &section);
    let invertible = quotient.is_square() && !quotient.determinant()?.is_zero();

    let outcomes: Vec<(bool, bool)> = trial_seeds(seed, trials)
        .into_par_iter()
        .map(|s| {
            let g = random_parabolic(big_n, s, height)?;
            check_trial(&g, n, k, &phi, &section, &quotient)
        })
        .collect::<Result<Vec<_>>>()?;
    let equivariance_failures = outcomes.iter().filter(|(ok, _)| !ok).count();
    let quotient_iso_equivariant = invertible && outcomes.iter().all(|(_, ok)| *ok);

    Ok(TheoremReport {
        big_n,
        n,
        k,
        kernel_matches,
        taylor_kernel_matches,
        rank_correct,
        equivariance_trials: trials,
        equivariance_failures,
        quotient_iso_equivariant,
    })
}

/// `d_0^r (g.f) == a^{-r} g.(d_0^r f)` for a parabolic `g`.
pub fn chain_rule_holds(g: &GroupElement, f: &PolyVector, r: u32) -> Result<bool> {
    if r > f.degree() {
        return Err(invalid(format!(
            "cannot differentiate degree {} form {r} times",
            f.degree()
        )));
    }
    let scale = chi(g, r)?;
    let mut lhs = crate::parabolic::act_on(g, f)?;
    let mut rhs = f.clone();
    for _ in 0..r {
        lhs = partial_derivative(&lhs, 0)?;
        rhs = partial_derivative(&rhs, 0)?;
    }
    let rhs = crate::parabolic::act_on(g, &rhs)?.scale(&scale);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, Subspace};

    #[test]
    fn phi_small_cases() {
        assert_eq!(
            phi_matrix(1, 2, 1).unwrap(),
            RationalMatrix::from_i64(&[&[2, 0, 0], &[0, 1, 0]])
        );
        // x0^3 -> 3 x0^2, x0^2 x1 -> 2 x0 x1, x0 x1^2 -> x1^2, x1^3 -> 0
        assert_eq!(
            phi_matrix(1, 3, 2).unwrap(),
            RationalMatrix::from_i64(&[&[3, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 1, 0]])
        );
        assert!(phi_matrix(1, 2, 2).is_err());
    }

    #[test]
    fn phi_is_surjective() {
        for big_n in 1..=3 {
            for n in 2..=5 {
                for k in 1..n {
                    let phi = phi_matrix(big_n, n, k).unwrap();
                    assert_eq!(
                        phi.rank(),
                        binomial((k as usize + big_n) as u64, big_n as u64) as usize
                    );
                }
            }
        }
    }

    #[test]
    fn taylor_small_cases() {
        let t = taylor_fiber_matrix(1, 2, 1).unwrap();
        // columns x0^2, x0x1, x1^2; rows jet (value, u-coefficient)
        assert_eq!(t.column(1), vec![int(0), int(1)]);
        assert_eq!(t.column(0), vec![int(1), int(0)]);
        assert_eq!(t.column(2), vec![int(0), int(0)]);
        assert!(taylor_fiber_matrix(1, 2, 3).is_err());
        // k = n keeps every coefficient
        assert_eq!(taylor_fiber_matrix(2, 3, 3).unwrap().rank(), 10);
    }

    #[test]
    fn jet_basis_order() {
        let jb = JetBasis::new(2, 2);
        let got: Vec<Vec<u32>> = jb
            .multi_indices()
            .iter()
            .map(|m| m.exponents().to_vec())
            .collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        assert_eq!(jb.index_of(&[1, 1]), Some(4));
        assert_eq!(jb.index_of(&[2, 1]), None);
    }

    #[test]
    fn kernel_examples() {
        assert!(verify_kernel(1, 2, 1).unwrap());
        assert_eq!(
            kernel_basis(&phi_matrix(1, 2, 1).unwrap()),
            Subspace::coordinate(3, [2]).unwrap()
        );
        assert!(verify_kernel(2, 2, 1).unwrap());
        assert_eq!(kernel_basis(&phi_matrix(2, 2, 1).unwrap()).dim(), 3);
        assert!(verify_kernel(1, 5, 3).unwrap());
    }

    #[test]
    fn exact_sequence_examples() {
        assert!(exact_sequence_check(1, 2, 1).unwrap());
        assert!(exact_sequence_check(2, 2, 1).unwrap());
        assert!(exact_sequence_check(3, 4, 2).unwrap());
        assert_eq!(m_power_subspace(3, 4, 2).unwrap().dim(), 25);
    }

    #[test]
    fn theorem_examples() {
        let r = verify_theorem(1, 3, 1, 100, 7).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.equivariance_failures, 0);
        let r = verify_theorem(2, 3, 2, 100, 0).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn identity_trial_is_trivially_equivariant() {
        let phi = phi_matrix(2, 4, 2).unwrap();
        let section = quotient_section(2, 4, 2).unwrap();
        let rows: Vec<usize> = (0..phi.rows()).collect();
        let q = phi.select(&rows, &section);
        assert_eq!(
            check_trial(&GroupElement::identity(2), 4, 2, &phi, &section, &q).unwrap(),
            (true, true)
        );
    }

    #[test]
    fn wrong_character_breaks_equivariance() {
        // phi against a target scaled by a^{-(n-k+1)} must fail for a != +-1.
        let g = GroupElement::parabolic(
            RationalMatrix::new(
                2,
                2,
                vec![int(2), int(1), int(0), Rational::new(1.into(), 2.into())],
            )
            .unwrap(),
        )
        .unwrap();
        let phi = phi_matrix(1, 3, 1).unwrap();
        let acts = sym_actions_upto(&g, 3);
        let wrong = acts[1].scale(&chi(&g, 3).unwrap());
        assert!(!intertwines(&phi, &acts[3], &wrong).unwrap());
    }
}
