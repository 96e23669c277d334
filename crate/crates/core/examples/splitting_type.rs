//! Splitting types on the projective line recovered from twisted section
//! counts, first for hand-made transition matrices and then for the jet
//! bundle.
//!
//! Run with `cargo run --example splitting_type`.

use pplab::linalg::{int, LaurentMatrix, LaurentPoly};
use pplab::split::{
    expected_splitting, h0_twisted, jet_transition_matrix, splitting_type, TransitionData,
};

fn main() -> pplab::error::Result<()> {
    // A nontrivial extension of O(1) by O(-1).
    let ext = TransitionData::new(LaurentMatrix::new(
        2,
        2,
        vec![
            LaurentPoly::monomial(int(1), -1),
            LaurentPoly::one(),
            LaurentPoly::zero(),
            LaurentPoly::monomial(int(1), 1),
        ],
    )?)?;
    let counts: Vec<usize> = (-3..=2)
        .map(|m| h0_twisted(&ext, m))
        .collect::<Result<_, _>>()?;
    println!("h0(E(m)) for m = -3..2: {counts:?}");
    println!("splitting type: {}", splitting_type(&ext)?);

    for (big_n, n, k) in [(1, 3, 1), (2, 2, 1), (1, 4, 2), (2, 4, 3), (2, 3, 0)] {
        let t = jet_transition_matrix(big_n, n, k)?;
        println!(
            "N={big_n} n={n} k={k}: {} (expected {})",
            splitting_type(&t)?,
            expected_splitting(big_n, n, k)
        );
    }
    Ok(())
}
