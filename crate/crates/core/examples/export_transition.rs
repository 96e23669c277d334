//! Export a jet transition matrix as JSON, read it back, and check it
//! against closed-form jets of monomials.
//!
//! Run with `cargo run --example export_transition -- [N n k]`.

use pplab::split::{describe, jet_transition_matrix, transition_consistency, TransitionData};

fn main() -> pplab::error::Result<()> {
    let args: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (big_n, n, k) = match args[..] {
        [a, b, c] => (a as usize, b, c),
        _ => (1, 3, 1),
    };
    let t = jet_transition_matrix(big_n, n, k)?;
    println!("{}", t.convention());
    print!("{}", describe(&t));

    let json = serde_json::to_string(&t.to_json()).expect("transition serializes");
    println!("{json}");
    let back = TransitionData::from_json(&json)?;
    println!("round trip equal: {}", back == t);
    println!(
        "consistent with monomial jets: {}",
        transition_consistency(&back, big_n, n, k)?
    );
    Ok(())
}
