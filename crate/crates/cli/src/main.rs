//! `ghwlab`: weight hierarchies and edge-deletion invariants of graphs.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::Failure;
use crate::output::Format;

pub const BUDGET_ENV: &str = "GHWLAB_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "ghwlab",
    version,
    about = "Generalized Hamming weights of incidence-matrix codes over graphs"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Subspace enumeration budget (default: $GHWLAB_BUDGET or 10^8).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Edge connectivity, weak edge biparticity and edge biparticity.
    Invariants(InvariantsArgs),
    /// Weight hierarchy of the incidence-matrix code over F_p.
    Hierarchy(HierarchyArgs),
    /// Check the rank law and the GHW = graph invariant equalities.
    Verify(VerifyArgs),
    /// Dimension and generalized Hamming weights of the evaluation code C_X(d).
    Evcode(EvcodeArgs),
    /// Print a graph in normalized form.
    Graph(GraphArgs),
}

/// A graph file (`.json` or edge list), or `builtin:prism` / `builtin:petersen`.
#[derive(Debug, Args, serde::Serialize)]
pub struct GraphInput {
    pub graph: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Lambda,
    Upsilon,
    Phi,
    All,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long = "rmax", default_value_t = 1)]
    pub r_max: usize,
    #[arg(long, value_enum, default_value_t = Which::All)]
    pub which: Which,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HierarchyMethod {
    Graph,
    Code,
    Both,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct HierarchyArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub p: u64,
    /// Default: the full dimension.
    #[arg(long = "rmax")]
    pub r_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = HierarchyMethod::Both)]
    pub method: HierarchyMethod,
    /// Also compute the hierarchy of the dual code.
    #[arg(long)]
    pub dual: bool,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct VerifyArgs {
    /// Include the built-in fixtures and their golden tables.
    #[arg(long)]
    pub fixtures: bool,
    /// Random corpus: S_MIN S_MAX COUNT, optionally followed by SEED.
    #[arg(long, num_args = 3..=4, value_names = ["S_MIN", "S_MAX", "COUNT", "SEED"])]
    pub random: Option<Vec<u64>>,
    /// Seed of the random corpus, unless given after COUNT.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Edge probability of the random model.
    #[arg(long, default_value_t = 0.5)]
    pub prob: f64,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3])]
    pub p: Vec<u64>,
    /// Default: full dimension for fixtures, 3 for random graphs.
    #[arg(long = "rmax")]
    pub r_max: Option<usize>,
    /// Golden tables replacing the built-in ones.
    #[arg(long)]
    pub golden: Option<std::path::PathBuf>,
    /// Evaluation-code degrees for the fullness check.
    #[arg(long, value_delimiter = ',', default_values_t = [2u32])]
    pub degrees: Vec<u32>,
    /// Treat skipped checks as failures.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct EvcodeArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub d: u32,
    /// Default: the full dimension.
    #[arg(long = "rmax")]
    pub r_max: Option<usize>,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct GraphArgs {
    #[command(flatten)]
    pub input: GraphInput,
}

fn budget(cli: &Cli) -> Result<u64, Failure> {
    if let Some(b) = cli.budget {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::usage(format!("{BUDGET_ENV}={v:?} is not a nonnegative integer"))
        }),
        Err(_) => Ok(ghwlab::DEFAULT_BUDGET),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| budget(&cli).and_then(|b| commands::run(&cli, b)));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.rendered);
            ExitCode::from(outcome.exit)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.exit)
        }
    }
}
