//! Exact-arithmetic checks for the bundle of principal parts `Pr^k(O(n))` on
//! projective space.
//!
//! The fiber over `[e_0]` is identified with `S^{n-k}(L*) (x) S^k(V*)` as a
//! representation of the parabolic subgroup `P`, and the restriction of the
//! bundle to a line is shown to split as copies of `O(n-k)`.
//!
//! - [`linalg`]: rational matrices, subspaces, Laurent polynomial matrices
//! - [`symspace`]: monomial bases of `S^n(V*)` and the `m`-power filtration
//! - [`parabolic`]: group elements, random sampling of `P`, induced actions
//! - [`jetmap`]: the fiber map `d_0^{n-k}` and the equivariance checks
//! - [`split`]: two-chart transition matrices and splitting types
//! - [`cli`]: parameter sweeps and reports behind the `pplab` binary
//!
//! Runnable examples live in `examples/`: `dimension_counts`,
//! `kernel_identification`, `parabolic_equivariance`, `splitting_type`,
//! `export_transition` and `sweep_report`.

pub mod cli;
pub mod error;
pub mod jetmap;
pub mod linalg;
pub mod parabolic;
pub mod split;
pub mod symspace;
