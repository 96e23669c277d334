//! Transition matrices of the k-jet bundle of `O(n)` along the coordinate
//! line `{x_2 = ... = x_N = 0}`, parameterized as `(1 : t : 0 : ... : 0)`.
//!
//! Chart `U_0` has coordinates `u_i = x_i / x_0` (`i = 1..N`), chart `U_1`
//! has `w_0 = x_0 / x_1` and `w_j = x_j / x_1` (`j = 2..N`). A form `F` of
//! degree `n` gives local functions `f_0 = F / x_0^n`, `f_1 = F / x_1^n`.
//! Jets are the plain Taylor coefficients of `f_0` at `(t, 0, ..., 0)` and of
//! `f_1` at `(1/t, 0, ..., 0)`, indexed by [`JetBasis`] with the first
//! series variable being `u_1` (resp. `w_0`).
//!
//! The stored matrix `T(t)` satisfies `jet_0 = T(t) * jet_1`, which is the
//! convention `f_0(t) = T(t) f_1(1/t)` used by the section counts.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::jetmap::JetBasis;
use crate::linalg::{parse_rational, rat, LaurentMatrix, LaurentPoly, Rational};
use crate::symspace::{binomial, monomial_basis};

/// How the stored matrix relates the two chart frames.
pub const CONVENTION: &str = "chart-0 frame = T(t) * chart-1 frame";

/// A two-chart cocycle on the projective line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionData {
    rank: usize,
    matrix: LaurentMatrix,
}

impl TransitionData {
    pub fn new(matrix: LaurentMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(Self {
            rank: matrix.rows(),
            matrix,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }

    pub fn convention(&self) -> &'static str {
        CONVENTION
    }

    /// `(c, e)` with `det T = c t^e`, or an error when the determinant is not
    /// a unit of the Laurent ring.
    pub fn determinant_monomial(&self) -> Result<(Rational, i64)> {
        let det = self.matrix.determinant()?;
        det.as_monomial()
            .ok_or_else(|| Error::InvalidTransition(format!("determinant {det} is not a monomial")))
    }

    /// `{"rank": r, "variable": "t", "entries": [...]}`, entries in
    /// row-major order, each a list of `[exponent, "num/den"]` terms in
    /// increasing exponent.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .matrix
            .entries()
            .iter()
            .map(|p| {
                Value::Array(
                    p.terms()
                        .map(|(e, c)| json!([e, format!("{}/{}", c.numer(), c.denom())]))
                        .collect(),
                )
            })
            .collect();
        json!({ "rank": self.rank, "variable": "t", "entries": entries })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize, Serialize)]
        struct Wire {
            rank: usize,
            variable: String,
            entries: Vec<Vec<(i64, String)>>,
        }
        let wire: Wire = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        if wire.variable != "t" {
            return Err(Error::Json(format!(
                "unsupported variable {:?}",
                wire.variable
            )));
        }
        if wire.entries.len() != wire.rank * wire.rank {
            return Err(Error::Json(format!(
                "expected {} entries for rank {}, found {}",
                wire.rank * wire.rank,
                wire.rank,
                wire.entries.len()
            )));
        }
        let mut polys = Vec::with_capacity(wire.entries.len());
        for terms in wire.entries {
            let mut p = LaurentPoly::zero();
            for (e, c) in terms {
                let c = parse_rational(&c)
                    .ok_or_else(|| Error::Json(format!("bad coefficient {c:?}")))?;
                p.add_term(e, c);
            }
            polys.push(p);
        }
        Self::new(LaurentMatrix::new(wire.rank, wire.rank, polys)?)
    }
}

/// Truncated power series in `vars` variables with Laurent coefficients,
/// indexed by a [`JetBasis`].
struct Series<'a> {
    jets: &'a JetBasis,
    table: &'a [Vec<Option<usize>>],
    coeffs: Vec<LaurentPoly>,
}

impl<'a> Series<'a> {
    fn zero(jets: &'a JetBasis, table: &'a [Vec<Option<usize>>]) -> Self {
        Self {
            jets,
            table,
            coeffs: vec![LaurentPoly::zero(); jets.len()],
        }
    }

    fn one(jets: &'a JetBasis, table: &'a [Vec<Option<usize>>]) -> Self {
        let mut s = Self::zero(jets, table);
        s.coeffs[0] = LaurentPoly::one();
        s
    }

    fn set(&mut self, alpha: &[u32], c: LaurentPoly) {
        if let Some(i) = self.jets.index_of(alpha) {
            self.coeffs[i] = c;
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.jets, self.table);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(idx) = self.table[i][j] {
                    let prod = a * b;
                    out.coeffs[idx] = &out.coeffs[idx] + &prod;
                }
            }
        }
        out
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.jets, self.table);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

fn product_table(jets: &JetBasis) -> Vec<Vec<Option<usize>>> {
    let idx = jets.multi_indices();
    idx.iter()
        .map(|a| {
            idx.iter()
                .map(|b| {
                    let sum: Vec<u32> = a
                        .exponents()
                        .iter()
                        .zip(b.exponents())
                        .map(|(x, y)| x + y)
                        .collect();
                    jets.index_of(&sum)
                })
                .collect()
        })
        .collect()
}

/// Jet transfer for `g(y) = y_0^n f(1/y_0, y_1/y_0, ..., y_{N-1}/y_0)`
/// expanded at `y = (t^center_exp, 0, ..., 0)`, where `f` is expanded at the
/// image point `(t^{-center_exp}, 0, ..., 0)`. Returns `A` with
/// `jet(g) = A * jet(f)`. This is the multivariate chain rule to order `k`,
/// carried out as composition of truncated power series.
fn chart_transfer(big_n: usize, n: u32, k: u32, center_exp: i64) -> LaurentMatrix {
    let jets = JetBasis::new(big_n, k);
    let table = product_table(&jets);
    let r = jets.len();
    let unit = |alpha_first: u32| {
        let mut a = vec![0u32; big_n];
        a[0] = alpha_first;
        a
    };

    // 1/(c + Y_0) = sum_m (-1)^m c^{-(m+1)} Y_0^m with c = t^center_exp.
    let mut inv = Series::zero(&jets, &table);
    for m in 0..=k {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        inv.set(
            &unit(m),
            LaurentPoly::monomial(rat(sign, 1), -center_exp * (m as i64 + 1)),
        );
    }
    // (c + Y_0)^n = sum_r C(n, r) c^{n-r} Y_0^r
    let mut prefactor = Series::zero(&jets, &table);
    for r_ in 0..=k.min(n) {
        let c = Rational::from_integer(BigInt::from(binomial(n as u64, r_ as u64)));
        prefactor.set(
            &unit(r_),
            LaurentPoly::monomial(c, center_exp * (n as i64 - r_ as i64)),
        );
    }
    // Displacements of the image coordinates from their base point.
    let mut displacements = Vec::with_capacity(big_n);
    let mut dz0 = Series::zero(&jets, &table);
    dz0.coeffs = inv.coeffs.clone();
    dz0.coeffs[0] = LaurentPoly::zero();
    displacements.push(dz0);
    for j in 1..big_n {
        let mut y = Series::zero(&jets, &table);
        let mut a = vec![0u32; big_n];
        a[j] = 1;
        y.set(&a, LaurentPoly::one());
        displacements.push(y.mul(&inv));
    }
    let powers: Vec<Vec<Series>> = displacements
        .iter()
        .map(|d| (0..=k).map(|e| d.pow(e)).collect())
        .collect();

    let mut out = LaurentMatrix::zeros(r, r);
    for (col, beta) in jets.multi_indices().iter().enumerate() {
        let mut s = prefactor.mul(&powers[0][beta.exponents()[0] as usize]);
        for (j, &e) in beta.exponents().iter().enumerate().skip(1) {
            if e > 0 {
                s = s.mul(&powers[j][e as usize]);
            }
        }
        for (row, c) in s.coeffs.into_iter().enumerate() {
            *out.get_mut(row, col) = c;
        }
    }
    out
}

/// Transition data of `Pr^k(O(n))` restricted to the line through `[e_0]`
/// and `[e_1]`, in the convention `jet_0 = T(t) * jet_1`.
pub fn jet_transition_matrix(big_n: usize, n: u32, k: u32) -> Result<TransitionData> {
    if big_n < 1 || n < 1 {
        return Err(invalid(format!(
            "requires N >= 1 and n >= 1, got N={big_n}, n={n}"
        )));
    }
    TransitionData::new(chart_transfer(big_n, n, k, 1))
}

/// The opposite transfer, `jet_1 = T'(t) * jet_0`; `T'` is the inverse of
/// the stored transition matrix.
pub fn jet_transition_inverse(big_n: usize, n: u32, k: u32) -> Result<LaurentMatrix> {
    if big_n < 1 || n < 1 {
        return Err(invalid(format!(
            "requires N >= 1 and n >= 1, got N={big_n}, n={n}"
        )));
    }
    Ok(chart_transfer(big_n, n, k, -1))
}

/// Jet of `F = x^p` in chart 0 at `u = (t0, 0, ..., 0)`, expanded directly
/// from `F(1, t0 + du_1, du_2, ..., du_N)` by the binomial theorem.
pub fn chart0_jet(exps: &[u32], k: u32, t0: &Rational) -> Vec<Rational> {
    let big_n = exps.len() - 1;
    let jets = JetBasis::new(big_n, k);
    let mut out = vec![Rational::zero(); jets.len()];
    let p1 = exps[1];
    for a in 0..=p1 {
        let mut alpha = vec![a];
        alpha.extend_from_slice(&exps[2..]);
        if let Some(i) = jets.index_of(&alpha) {
            let c = Rational::from_integer(BigInt::from(binomial(p1 as u64, a as u64)));
            out[i] = c * num_traits::pow(t0.clone(), (p1 - a) as usize);
        }
    }
    out
}

/// Jet of `F = x^p` in chart 1 at `w = (s0, 0, ..., 0)`, from
/// `F(s0 + dw_0, 1, dw_2, ..., dw_N)`.
pub fn chart1_jet(exps: &[u32], k: u32, s0: &Rational) -> Vec<Rational> {
    let big_n = exps.len() - 1;
    let jets = JetBasis::new(big_n, k);
    let mut out = vec![Rational::zero(); jets.len()];
    let p0 = exps[0];
    for b in 0..=p0 {
        let mut beta = vec![b];
        beta.extend_from_slice(&exps[2..]);
        if let Some(i) = jets.index_of(&beta) {
            let c = Rational::from_integer(BigInt::from(binomial(p0 as u64, b as u64)));
            out[i] = c * num_traits::pow(s0.clone(), (p0 - b) as usize);
        }
    }
    out
}

/// Sample points used by [`transition_consistency`].
pub fn default_sample_points() -> Vec<Rational> {
    vec![Rational::one(), rat(2, 1), rat(-1, 3)]
}

/// For every degree-`n` monomial `F` and each sample `t0`, the chart-0 jet of
/// `F` equals `T(t0)` applied to its chart-1 jet.
pub fn transition_consistency(t: &TransitionData, big_n: usize, n: u32, k: u32) -> Result<bool> {
    transition_consistency_at(t, big_n, n, k, &default_sample_points())
}

pub fn transition_consistency_at(
    t: &TransitionData,
    big_n: usize,
    n: u32,
    k: u32,
    samples: &[Rational],
) -> Result<bool> {
    let expected_rank = binomial(big_n as u64 + k as u64, big_n as u64) as usize;
    if t.rank() != expected_rank {
        return Ok(false);
    }
    let basis = monomial_basis(big_n, n);
    for t0 in samples {
        if t0.is_zero() {
            return Err(invalid("sample points must be nonzero"));
        }
        let at = t.matrix().eval(t0)?;
        let s0 = t0.recip();
        for m in basis.monomials() {
            let jet0 = chart0_jet(m.exponents(), k, t0);
            let jet1 = chart1_jet(m.exponents(), k, &s0);
            if at.apply(&jet1)? != jet0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Human-readable dump of a transition matrix.
pub fn describe(t: &TransitionData) -> String {
    let mut s = String::new();
    for i in 0..t.rank() {
        let row: Vec<String> = (0..t.rank())
            .map(|j| t.matrix().get(i, j).to_string())
            .collect();
        s.push_str(&format!("[{}]\n", row.join(", ")));
    }
    s
}
