//! Command-line surface: parameter grids, seeded trials and structured
//! reports.
//!
//! Exit codes: `0` when every check passes, `1` on a mathematical
//! counterexample, `2` on usage or parameter errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::jetmap::{exact_sequence_check, phi_matrix, verify_theorem_with_height, TheoremReport};
use crate::linalg::fmt_rational;
use crate::parabolic::DEFAULT_HEIGHT;
use crate::split::{
    describe, expected_splitting, jet_transition_matrix, splitting_type, SplittingType,
};
use crate::symspace::{binomial, dim_sym, lemma1_identity, m_power_subspace};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "PPLAB_SEED";

pub const SCHEMA_VERSION: u32 = 1;

/// Inclusive range of naturals: `"3"`, `"2..5"` or `"1,3,4"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatRange(Vec<u32>);

impl NatRange {
    pub fn values(&self) -> &[u32] {
        &self.0
    }
}

impl FromStr for NatRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |x: &str| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| format!("`{x}` is not a natural number"))
        };
        let mut values: Vec<u32> = if let Some((a, b)) = s.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            (num(a)?..=num(b)?).collect()
        } else {
            s.split(',')
                .map(num)
                .collect::<std::result::Result<_, _>>()?
        };
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            return Err(format!("range `{s}` is empty"));
        }
        Ok(NatRange(values))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "pplab",
    version,
    about = "Exact checks for jets of O(n) on projective space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Kernel, rank and equivariance of the fiber map
    VerifyTheorem(GridArgs),
    /// Splitting type of the jet bundle restricted to a line
    VerifyCorollary(GridArgs),
    /// Dimension counts of the exact sequence
    Dims(GridArgs),
    /// Splitting type for 0 <= k < n
    SplittingType(GridArgs),
    /// Every check over a grid of triples
    Sweep(GridArgs),
    /// Write the jet transition matrix as JSON
    ExportTransition(GridArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Projective dimension N
    #[arg(long = "N")]
    pub big_n: Option<NatRange>,
    /// Line bundle degree n
    #[arg(long = "n")]
    pub n: Option<NatRange>,
    /// Jet order k
    #[arg(long = "k")]
    pub k: Option<NatRange>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub seed: i64,
    #[arg(long, default_value_t = DEFAULT_HEIGHT)]
    pub height: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Write the report here instead of stdout
    #[arg(long = "out")]
    pub out_path: Option<PathBuf>,
    /// Include full matrices in JSON reports
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyTheorem,
    VerifyCorollary,
    Dims,
    SplittingType,
    Sweep,
    ExportTransition,
}

impl Command {
    /// Commands whose triples must satisfy `1 <= k < n`.
    fn theorem_regime(self) -> bool {
        matches!(
            self,
            Command::VerifyTheorem | Command::VerifyCorollary | Command::Dims | Command::Sweep
        )
    }
}

/// Validated configuration. Every triple in [`RunConfig::triples`] is
/// admissible for the command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(rename = "N")]
    pub big_n: Vec<usize>,
    pub n: Vec<u32>,
    pub k: Option<Vec<u32>>,
    pub trials: usize,
    pub seed: i64,
    pub height: u32,
    pub output: OutputFormat,
    #[serde(skip)]
    pub out_path: Option<PathBuf>,
    pub verbose: bool,
}

impl RunConfig {
    /// Grid used when `--N` or `--n` is omitted.
    pub fn default_grid() -> (Vec<usize>, Vec<u32>) {
        (vec![1, 2, 3], (2..=5).collect())
    }

    pub fn new(
        command: Command,
        big_n: Vec<usize>,
        n: Vec<u32>,
        k: Option<Vec<u32>>,
    ) -> Result<Self> {
        let config = RunConfig {
            command,
            big_n,
            n,
            k,
            trials: 100,
            seed: 0,
            height: DEFAULT_HEIGHT,
            output: OutputFormat::Text,
            out_path: None,
            verbose: false,
        };
        config.validate()?;
        Ok(config)
    }

    /// Builds a configuration from parsed arguments. `env_seed` is the value
    /// of [`SEED_ENV`], if set.
    pub fn from_cli(cli: Cli, env_seed: Option<&str>) -> Result<Self> {
        let (command, args) = match cli.command {
            CliCommand::VerifyTheorem(a) => (Command::VerifyTheorem, a),
            CliCommand::VerifyCorollary(a) => (Command::VerifyCorollary, a),
            CliCommand::Dims(a) => (Command::Dims, a),
            CliCommand::SplittingType(a) => (Command::SplittingType, a),
            CliCommand::Sweep(a) => (Command::Sweep, a),
            CliCommand::ExportTransition(a) => (Command::ExportTransition, a),
        };
        let seed = match env_seed {
            Some(s) => s.trim().parse().map_err(|_| {
                Error::InvalidParameters(format!("{SEED_ENV}=`{s}` is not an integer"))
            })?,
            None => args.seed,
        };
        let (default_n_big, default_n) = Self::default_grid();
        let config = RunConfig {
            command,
            big_n: args
                .big_n
                .map(|r| r.values().iter().map(|&x| x as usize).collect())
                .unwrap_or(default_n_big),
            n: args.n.map(|r| r.0).unwrap_or(default_n),
            k: args.k.map(|r| r.0),
            trials: args.trials,
            seed,
            height: args.height,
            output: args.output,
            out_path: args.out_path,
            verbose: args.verbose,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        if self.big_n.is_empty() || self.n.is_empty() || self.k.as_ref().is_some_and(Vec::is_empty)
        {
            return bad("ranges must be nonempty".into());
        }
        if self.big_n.contains(&0) {
            return bad("precondition N >= 1 violated".into());
        }
        if self.height == 0 {
            return bad("precondition height >= 1 violated".into());
        }
        match self.command {
            Command::Sweep => {
                if self.triples().is_empty() {
                    return bad("no triple in the ranges satisfies 1 <= k < n".into());
                }
            }
            Command::ExportTransition => {
                let Some(k) = &self.k else {
                    return bad("export-transition needs --k".into());
                };
                if self.big_n.len() != 1 || self.n.len() != 1 || k.len() != 1 {
                    return bad("export-transition takes single values of N, n and k".into());
                }
                if self.n[0] == 0 {
                    return bad("precondition n >= 1 violated".into());
                }
            }
            command => {
                let min_k = if command.theorem_regime() { 1 } else { 0 };
                for &n in &self.n {
                    for k in self.k_values(n) {
                        if k < min_k || k >= n {
                            return bad(format!(
                                "precondition {min_k} <= k < n violated at n={n}, k={k}"
                            ));
                        }
                    }
                    if self.k.is_none() && min_k >= n {
                        return bad(format!("precondition 1 <= k < n has no solution at n={n}"));
                    }
                }
            }
        }
        Ok(())
    }

    fn k_values(&self, n: u32) -> Vec<u32> {
        match &self.k {
            Some(k) => k.clone(),
            None if self.command == Command::SplittingType => (0..n).collect(),
            None => (1..n).collect(),
        }
    }

    /// Triples `(N, n, k)` in lexicographic order. For sweeps only those with
    /// `1 <= k < n` are kept.
    pub fn triples(&self) -> Vec<(usize, u32, u32)> {
        let mut out = Vec::new();
        for &big_n in &self.big_n {
            for &n in &self.n {
                for k in self.k_values(n) {
                    if self.command != Command::Sweep || (1..n).contains(&k) {
                        out.push((big_n, n, k));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimCounts {
    pub dim_source: usize,
    pub dim_kernel: usize,
    pub dim_fiber: usize,
    pub lemma1_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingCheck {
    pub observed: SplittingType,
    pub expected: SplittingType,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleResult {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub n: u32,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_sequence: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<DimCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splitting: Option<SplittingCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Value>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub schema: u32,
    pub tool_version: String,
    pub config: RunConfig,
    pub results: Vec<TripleResult>,
    pub overall_pass: bool,
    pub elapsed_ms: u64,
}

impl SweepReport {
    /// JSON without `elapsed_ms`; identical across runs of one config.
    pub fn result_body(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("elapsed_ms");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mark = |ok: bool| if ok { "✓" } else { "✗" };
        let mut s = String::new();
        for r in &self.results {
            let _ = write!(s, "N={} n={} k={}", r.big_n, r.n, r.k);
            if let Some(t) = &r.theorem {
                let _ = write!(
                    s,
                    "  kernel {}  rank {}  equivariance {}/{}  quotient {}",
                    mark(t.kernel_matches && t.taylor_kernel_matches),
                    mark(t.rank_correct),
                    t.equivariance_trials - t.equivariance_failures,
                    t.equivariance_trials,
                    mark(t.quotient_iso_equivariant)
                );
            }
            if let Some(ok) = r.exact_sequence {
                let _ = write!(s, "  exact {}", mark(ok));
            }
            if let Some(d) = &r.dims {
                let _ = write!(
                    s,
                    "  dim {} = {} + {}  lemma {}",
                    d.dim_source,
                    d.dim_kernel,
                    d.dim_fiber,
                    mark(d.lemma1_identity)
                );
            }
            if let Some(sp) = &r.splitting {
                let _ = write!(s, "  splitting {} {}", sp.observed, mark(sp.matches));
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "overall: {} ({} triples, {} ms)",
            if self.overall_pass { "PASS" } else { "FAIL" },
            self.results.len(),
            self.elapsed_ms
        );
        s
    }
}

fn rational_rows(m: &crate::linalg::RationalMatrix) -> Value {
    m.row_vecs()
        .iter()
        .map(|row| row.iter().map(fmt_rational).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

fn check_triple(config: &RunConfig, big_n: usize, n: u32, k: u32) -> Result<TripleResult> {
    let command = config.command;
    let theorem_checks = matches!(command, Command::VerifyTheorem | Command::Sweep);
    let dims_checks = matches!(command, Command::Dims | Command::Sweep);
    let splitting_checks = matches!(
        command,
        Command::VerifyCorollary | Command::SplittingType | Command::Sweep
    );

    let theorem = if theorem_checks {
        Some(verify_theorem_with_height(
            big_n,
            n,
            k,
            config.trials,
            config.seed,
            config.height,
        )?)
    } else {
        None
    };
    let exact_sequence = if theorem_checks {
        Some(exact_sequence_check(big_n, n, k)?)
    } else {
        None
    };
    let dims = if dims_checks {
        Some(DimCounts {
            dim_source: dim_sym(big_n, n),
            dim_kernel: m_power_subspace(big_n, n, k)?.dim(),
            dim_fiber: binomial(big_n as u64 + k as u64, big_n as u64) as usize,
            lemma1_identity: lemma1_identity(big_n, n, k)?,
        })
    } else {
        None
    };
    let transition = if splitting_checks {
        Some(jet_transition_matrix(big_n, n, k)?)
    } else {
        None
    };
    let splitting = match &transition {
        Some(t) => {
            let observed = splitting_type(t)?;
            let expected = expected_splitting(big_n, n, k);
            Some(SplittingCheck {
                matches: observed == expected,
                observed,
                expected,
            })
        }
        None => None,
    };
    let matrices = if config.verbose {
        let mut map = serde_json::Map::new();
        if theorem_checks {
            map.insert("phi".into(), rational_rows(&phi_matrix(big_n, n, k)?));
        }
        if let Some(t) = &transition {
            map.insert("transition".into(), t.to_json());
        }
        Some(Value::Object(map))
    } else {
        None
    };

    let pass = theorem.as_ref().is_none_or(TheoremReport::passed)
        && exact_sequence.unwrap_or(true)
        && dims
            .as_ref()
            .is_none_or(|d| d.lemma1_identity && d.dim_source == d.dim_kernel + d.dim_fiber)
        && splitting.as_ref().is_none_or(|s| s.matches);
    Ok(TripleResult {
        big_n,
        n,
        k,
        theorem,
        exact_sequence,
        dims,
        splitting,
        matrices,
        pass,
    })
}

/// Runs the configured checks on every triple. Triples are processed in
/// parallel and reported in `(N, n, k)` order.
pub fn sweep(config: &RunConfig) -> Result<SweepReport> {
    config.validate()?;
    if config.command == Command::ExportTransition {
        return Err(Error::InvalidParameters(
            "export-transition produces no sweep report".into(),
        ));
    }
    let start = Instant::now();
    let results = config
        .triples()
        .into_par_iter()
        .map(|(big_n, n, k)| check_triple(config, big_n, n, k))
        .collect::<Result<Vec<_>>>()?;
    let overall_pass = results.iter().all(|r| r.pass);
    Ok(SweepReport {
        schema: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        results,
        overall_pass,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn export_transition(config: &RunConfig) -> Result<String> {
    let (big_n, n, k) = config.triples()[0];
    let t = jet_transition_matrix(big_n, n, k)?;
    Ok(match config.output {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&t.to_json()).expect("transition serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => format!("# {}\n{}", t.convention(), describe(&t)),
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameters(_) => EXIT_USAGE,
        _ => EXIT_COUNTEREXAMPLE,
    }
}

fn emit(config: &RunConfig, text: &str) -> i32 {
    match &config.out_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{text}"),
    }
    EXIT_PASS
}

/// Executes `config`, writing the report to stdout or `--out`, and returns
/// the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let outcome = match config.command {
        Command::ExportTransition => export_transition(config).map(|text| (text, true)),
        _ => sweep(config).map(|report| {
            let text = match config.output {
                OutputFormat::Json => report.to_json() + "\n",
                OutputFormat::Text => report.to_text(),
            };
            (text, report.overall_pass)
        }),
    };
    match outcome {
        Ok((text, pass)) => {
            let code = emit(config, &text);
            if code != EXIT_PASS {
                code
            } else if pass {
                EXIT_PASS
            } else {
                EXIT_COUNTEREXAMPLE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (including the program name), applies [`SEED_ENV`] and
/// runs. Usage errors print a diagnostic and return [`EXIT_USAGE`].
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    match RunConfig::from_cli(cli, env_seed.as_deref()) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
