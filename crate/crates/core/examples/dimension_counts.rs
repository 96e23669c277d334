//! Dimension counts behind the exact sequence
//! `0 -> m^{k+1} S^{n-k-1} -> S^n -> S^{n-k}(L*) (x) S^k -> 0`.
//!
//! Run with `cargo run --example dimension_counts`.

use pplab::symspace::{binomial, dim_sym, lemma1_identity, m_power_subspace, monomial_basis};

fn main() -> pplab::error::Result<()> {
    let basis = monomial_basis(1, 2);
    let names: Vec<String> = basis.monomials().iter().map(|m| m.to_string()).collect();
    println!("basis of S^2 for N=1: {}", names.join(", "));

    println!(
        "{:>3} {:>3} {:>3} {:>8} {:>8} {:>8} {:>6}",
        "N", "n", "k", "dim S^n", "kernel", "fiber", "ok"
    );
    for big_n in 1..=3 {
        for n in 2..=5 {
            for k in 1..n {
                let kernel = m_power_subspace(big_n, n, k)?.dim();
                let fiber = binomial(big_n as u64 + k as u64, big_n as u64);
                println!(
                    "{big_n:>3} {n:>3} {k:>3} {:>8} {kernel:>8} {fiber:>8} {:>6}",
                    dim_sym(big_n, n),
                    lemma1_identity(big_n, n, k)?
                );
            }
        }
    }
    Ok(())
}
