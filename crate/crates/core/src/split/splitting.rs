//! Splitting types of vector bundles on the projective line from twisted
//! section counts.
//!
//! With `f_0(t) = t^d f_1(1/t)` describing `O(d)`, a bundle `E` with
//! transition `T` has `h^0(E(m))` equal to the dimension of pairs of
//! polynomial vectors `(f_0(t), f_1(s))` with `f_0(t) = t^m T(t) f_1(1/t)`.
//! For `E = sum O(d_i)`, `h^0(E(m)) - h^0(E(m-1)) = #{ i : d_i >= -m }`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::transition::{jet_transition_matrix, TransitionData};
use crate::error::{Error, Result};
use crate::linalg::{int, rref, LaurentMatrix, LaurentPoly, RationalMatrix};
use crate::symspace::{binomial, check_theorem_range};

/// Degrees `d_i` of `E = O(d_1) + ... + O(d_r)`, sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SplittingType {
    degrees: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut degrees: Vec<i64>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Self { degrees }
    }

    /// `count` copies of `O(degree)`.
    pub fn uniform(degree: i64, count: usize) -> Self {
        Self {
            degrees: vec![degree; count],
        }
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// First Chern class.
    pub fn degree_sum(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn is_uniform(&self) -> bool {
        self.degrees.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

struct Shape {
    det_exp: i64,
    max_exp: i64,
    inv_min_exp: i64,
    inv_max_exp: i64,
}

fn shape(t: &TransitionData) -> Result<Shape> {
    let m = t.matrix();
    let (inv, det) = m
        .inverse_with_det()
        .map_err(|_| Error::InvalidTransition("determinant is not a unit c*t^e".into()))?;
    let (_, det_exp) = det.as_monomial().expect("unit determinant");
    let (Some(max_exp), Some(inv_min_exp), Some(inv_max_exp)) =
        (m.max_exp(), inv.min_exp(), inv.max_exp())
    else {
        return Err(Error::InvalidTransition("zero matrix".into()));
    };
    Ok(Shape {
        det_exp,
        max_exp,
        inv_min_exp,
        inv_max_exp,
    })
}

/// Upper bound on the degree of `f_1` for a section of `E(m)`, from
/// `f_1(1/t) = t^{-m} T^{-1}(t) f_0(t)`.
fn degree_bound(s: &Shape, m: i64) -> Option<usize> {
    let bound = m - s.inv_min_exp;
    (bound >= 0).then_some(bound as usize)
}

/// `dim H^0(P^1, E(m))` for the bundle with transition `t`.
pub fn h0_twisted(t: &TransitionData, m: i64) -> Result<usize> {
    let s = shape(t)?;
    Ok(h0_with_shape(t, &s, m))
}

fn h0_with_shape(t: &TransitionData, s: &Shape, m: i64) -> usize {
    let r = t.rank();
    let Some(bound) = degree_bound(s, m) else {
        return 0;
    };
    let width = bound + 1;
    let unknowns = r * width;

    // Coefficient of t^x in component a of t^m T(t) f_1(1/t), where the
    // unknown f_1[b] has coefficients at s^j, j in 0..=bound:
    //   sum_{b, e, j : m + e - j = x} T_ab[e] * f_1[b][j].
    // Only negative x constrain anything.
    let mut rows: BTreeMap<(usize, i64), Vec<(usize, crate::linalg::Rational)>> = BTreeMap::new();
    for a in 0..r {
        for b in 0..r {
            for (e, c) in t.matrix().get(a, b).terms() {
                for j in 0..width {
                    let x = m + e - j as i64;
                    if x < 0 {
                        rows.entry((a, x))
                            .or_default()
                            .push((b * width + j, c.clone()));
                    }
                }
            }
        }
    }
    if rows.is_empty() {
        return unknowns;
    }
    let mut mat = RationalMatrix::zeros(rows.len(), unknowns);
    for (i, terms) in rows.into_values().enumerate() {
        for (col, c) in terms {
            mat[(i, col)] += c;
        }
    }
    unknowns - rref(&mat).rank
}

/// Splitting type recovered from first differences of `h^0(E(m))`.
///
/// The scan starts at `m = -max_exp - 1`, where no twisted section exists,
/// and moves up until the difference reaches the rank. Every `d_i` is at most
/// `max_exp`, and the dual bundle (transition `(T^{-1})^T`) shows every `d_i`
/// is at least `-max_exp(T^{-1})`, which bounds the window.
pub fn splitting_type(t: &TransitionData) -> Result<SplittingType> {
    let s = shape(t)?;
    let r = t.rank();
    let bottom = -s.max_exp - 1;
    let top = s.inv_max_exp + 1;

    let h_bottom = h0_with_shape(t, &s, bottom);
    if h_bottom != 0 || h0_with_shape(t, &s, bottom - 1) != 0 {
        return Err(Error::InvalidTransition(format!(
            "twisted sections at m = {bottom}"
        )));
    }
    // counts[i] = #{ d >= -m } for m = bottom + 1 + i
    let mut counts = Vec::new();
    let mut prev = h_bottom;
    let mut m = bottom;
    loop {
        m += 1;
        if m > top {
            return Err(Error::InvalidTransition(format!(
                "section counts did not stabilize in [{bottom}, {top}]"
            )));
        }
        let h = h0_with_shape(t, &s, m);
        let diff = h
            .checked_sub(prev)
            .ok_or_else(|| Error::InvalidTransition("h0 decreased".into()))?;
        if diff > r || counts.last().is_some_and(|&c| diff < c) {
            return Err(Error::InvalidTransition(format!(
                "inconsistent section count at m = {m}"
            )));
        }
        counts.push(diff);
        prev = h;
        if diff == r {
            break;
        }
    }
    let mut degrees = Vec::with_capacity(r);
    let mut below = 0;
    for (i, &c) in counts.iter().enumerate() {
        let degree = -(bottom + 1 + i as i64);
        degrees.extend(std::iter::repeat_n(degree, c - below));
        below = c;
    }
    let st = SplittingType::new(degrees);
    if st.degree_sum() != s.det_exp {
        return Err(Error::InvalidTransition(format!(
            "degree sum {} differs from determinant exponent {}",
            st.degree_sum(),
            s.det_exp
        )));
    }
    Ok(st)
}

/// `{n - k}` with multiplicity `C(N+k, N)`.
pub fn expected_splitting(big_n: usize, n: u32, k: u32) -> SplittingType {
    let count = binomial(big_n as u64 + k as u64, big_n as u64) as usize;
    SplittingType::uniform(n as i64 - k as i64, count)
}

/// Splitting type of the restricted jet bundle against `{n-k}^C(N+k,N)`.
pub fn verify_corollary(big_n: usize, n: u32, k: u32) -> Result<bool> {
    check_theorem_range(big_n, n, k)?;
    let t = jet_transition_matrix(big_n, n, k)?;
    Ok(splitting_type(&t)? == expected_splitting(big_n, n, k))
}

/// A random product of elementary matrices `I + p(t) E_ij` with `p` a
/// polynomial of degree at most 2, small integer coefficients. Its
/// determinant is 1. With `inverse_variable` the entries are polynomials in
/// `1/t` instead.
pub fn random_gauge(rank: usize, seed: u64, inverse_variable: bool) -> LaurentMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = LaurentMatrix::identity(rank);
    if rank < 2 {
        return g;
    }
    for _ in 0..2 * rank {
        let i = rng.gen_range(0..rank);
        let mut j = rng.gen_range(0..rank - 1);
        if j >= i {
            j += 1;
        }
        let p = LaurentPoly::from_terms((0..=2).map(|e| (e, int(rng.gen_range(-2..=2)))));
        let mut el = LaurentMatrix::identity(rank);
        *el.get_mut(i, j) = p;
        g = &g * &el;
    }
    if inverse_variable {
        g.invert_variable()
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn td(m: LaurentMatrix) -> TransitionData {
        TransitionData::new(m).unwrap()
    }

    #[test]
    fn line_bundle_sections() {
        for d in -4..=4 {
            let t = td(LaurentMatrix::monomial_diagonal(&[d]));
            for m in -6..=6 {
                assert_eq!(
                    h0_twisted(&t, m).unwrap() as i64,
                    (d + m + 1).max(0),
                    "d={d} m={m}"
                );
            }
        }
    }

    #[test]
    fn diagonal_sections() {
        let t = td(LaurentMatrix::monomial_diagonal(&[2, 2]));
        assert_eq!(h0_twisted(&t, -3).unwrap(), 0);
        assert_eq!(h0_twisted(&t, 0).unwrap(), 6);
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(
            splitting_type(&td(LaurentMatrix::monomial_diagonal(&[2, 2])))
                .unwrap()
                .degrees(),
            &[2, 2]
        );
        let jordan = LaurentMatrix::new(
            2,
            2,
            vec![
                LaurentPoly::monomial(int(1), 1),
                LaurentPoly::one(),
                LaurentPoly::zero(),
                LaurentPoly::monomial(int(1), 1),
            ],
        )
        .unwrap();
        assert_eq!(
            splitting_type(&td(jordan)).unwrap(),
            SplittingType::new(vec![1, 1])
        );
        let jets = jet_transition_matrix(1, 3, 1).unwrap();
        assert_eq!(
            splitting_type(&jets).unwrap(),
            SplittingType::new(vec![2, 2])
        );
    }

    fn upper(d0: i64, d1: i64) -> LaurentMatrix {
        LaurentMatrix::new(
            2,
            2,
            vec![
                LaurentPoly::monomial(int(1), d0),
                LaurentPoly::one(),
                LaurentPoly::zero(),
                LaurentPoly::monomial(int(1), d1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn extensions() {
        // Ext^1(O(-2), O(2)) = H^1(O(4)) = 0, so this extension splits.
        assert_eq!(
            splitting_type(&td(upper(2, -2))).unwrap(),
            SplittingType::new(vec![2, -2])
        );
        // The nontrivial extension of O(1) by O(-1) is O + O.
        assert_eq!(
            splitting_type(&td(upper(-1, 1))).unwrap(),
            SplittingType::new(vec![0, 0])
        );
        assert_eq!(
            splitting_type(&td(LaurentMatrix::monomial_diagonal(&[-1, 1]))).unwrap(),
            SplittingType::new(vec![1, -1])
        );
    }

    #[test]
    fn corollary_examples() {
        assert!(verify_corollary(1, 3, 1).unwrap());
        assert!(verify_corollary(2, 2, 1).unwrap());
        assert!(verify_corollary(1, 4, 2).unwrap());
        assert!(verify_corollary(1, 2, 2).is_err());
    }

    #[test]
    fn order_zero_pins_convention() {
        for n in 1..=4 {
            let t = jet_transition_matrix(2, n, 0).unwrap();
            assert_eq!(
                splitting_type(&t).unwrap(),
                SplittingType::new(vec![n as i64])
            );
        }
    }

    #[test]
    fn rejects_non_unit_determinant() {
        let m =
            LaurentMatrix::from_diagonal(vec![LaurentPoly::from_terms([(0, int(1)), (1, int(1))])]);
        assert!(matches!(
            splitting_type(&td(m)),
            Err(Error::InvalidTransition(_))
        ));
    }

    #[test]
    fn gauge_is_unimodular() {
        for seed in 0..5 {
            let g = random_gauge(3, seed, false);
            assert_eq!(g.determinant().unwrap(), LaurentPoly::one());
            assert!(g.min_exp().unwrap() >= 0);
            let h = random_gauge(3, seed, true);
            assert!(h.max_exp().unwrap() <= 0);
        }
    }

    #[test]
    fn scalar_multiple_keeps_type() {
        let m = LaurentMatrix::from_diagonal(vec![
            LaurentPoly::monomial(rat(-1, 3), 3),
            LaurentPoly::monomial(rat(5, 1), -1),
        ]);
        assert_eq!(
            splitting_type(&td(m)).unwrap(),
            SplittingType::new(vec![3, -1])
        );
    }
}
