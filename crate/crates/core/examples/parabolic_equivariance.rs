//! Random parabolic group elements acting on polynomials, and the
//! equivariance of `phi` with respect to `S^n` and `chi^{n-k} (x) S^k`.
//!
//! Run with `cargo run --example parabolic_equivariance`.

use pplab::jetmap::{phi_matrix, verify_theorem};
use pplab::parabolic::{chi, is_equivariant, random_parabolic, sym_action, trial_seeds, RepAction};

fn main() -> pplab::error::Result<()> {
    let (big_n, n, k) = (2, 3, 1);
    let g = random_parabolic(big_n, 7, 3)?;
    println!("g = {g:?}");
    println!("chi(g, 1) = {}", chi(&g, 1)?);
    println!("action on S^1:\n{:?}", sym_action(&g, 1));

    let phi = phi_matrix(big_n, n, k)?;
    let src = RepAction::symmetric_power(big_n, n);
    let dst = RepAction::target(big_n, n, k);
    let ok = trial_seeds(7, 20)
        .into_iter()
        .map(|s| random_parabolic(big_n, s, 3).and_then(|g| is_equivariant(&phi, &src, &dst, &g)))
        .collect::<pplab::error::Result<Vec<bool>>>()?;
    println!(
        "phi equivariant on {}/{} samples",
        ok.iter().filter(|&&b| b).count(),
        ok.len()
    );

    let report = verify_theorem(big_n, n, k, 100, 7)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(())
}
