//! A small parameter sweep through the library entry point of the CLI.
//!
//! Run with `cargo run --example sweep_report`.

use pplab::cli::{sweep, Command, RunConfig};

fn main() -> pplab::error::Result<()> {
    let mut config = RunConfig::new(Command::Sweep, vec![1, 2], (2..=4).collect(), None)?;
    config.trials = 25;
    config.seed = 11;
    let report = sweep(&config)?;
    print!("{}", report.to_text());

    let again = sweep(&config)?;
    println!(
        "deterministic: {}",
        report.result_body() == again.result_body()
    );
    Ok(())
}
