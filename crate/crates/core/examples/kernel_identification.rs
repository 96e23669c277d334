//! The kernel of `phi = d_0^{n-k}` and of the Taylor fiber map both equal the
//! subspace spanned by monomials divisible by `m^{k+1}`.
//!
//! Run with `cargo run --example kernel_identification`.

use pplab::jetmap::{
    exact_sequence_check, phi_matrix, quotient_section, taylor_fiber_matrix, verify_kernel,
};
use pplab::linalg::{kernel_basis, subspace_equal};
use pplab::symspace::m_power_subspace;

fn main() -> pplab::error::Result<()> {
    let (big_n, n, k) = (1, 3, 1);
    let phi = phi_matrix(big_n, n, k)?;
    println!("phi for N={big_n} n={n} k={k}:\n{phi:?}");
    println!("taylor fiber map:\n{:?}", taylor_fiber_matrix(big_n, n, k)?);

    let ker = kernel_basis(&phi);
    println!("ker phi (RREF rows):\n{:?}", ker.basis());
    println!(
        "ker phi == m^(k+1) S^(n-k-1): {}",
        subspace_equal(&ker, &m_power_subspace(big_n, n, k)?)?
    );
    println!(
        "quotient section (monomial indices): {:?}",
        quotient_section(big_n, n, k)?
    );

    for (big_n, n, k) in [(2, 4, 2), (3, 5, 3)] {
        println!(
            "N={big_n} n={n} k={k}: kernels agree {}, sequence exact {}",
            verify_kernel(big_n, n, k)?,
            exact_sequence_check(big_n, n, k)?
        );
    }
    Ok(())
}
