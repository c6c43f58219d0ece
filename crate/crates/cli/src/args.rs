use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gmcp_core::Algorithm;

#[derive(Debug, Parser)]
#[command(
    name = "gmcp",
    version,
    about = "Generalized maximum capacity path toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Time the solvers on generated instances and write CSV records.
    Bench(BenchArgs),
    /// Compare both solvers against exhaustive enumeration.
    Oracle(OracleArgs),
    /// Write the mixed zero-one model in LP format.
    ExportLp(ExportArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
    pub nodes: Option<usize>,
    #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
    pub paths: Option<usize>,
    #[arg(long, default_value_t = 0, conflicts_with = "preset")]
    pub cycles: usize,
    #[arg(long = "er-prob", default_value_t = 0.0, conflicts_with = "preset")]
    pub er_prob: f64,
    /// Benchmark grid row, 1 to 15.
    #[arg(long)]
    pub preset: Option<usize>,
    /// Defaults to 0, or to the row number with --preset.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "alg2-heap")]
    pub alg: Algorithm,
    /// Verify the answer: optimality conditions for alg2 and, on small
    /// instances, exhaustive enumeration.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Grid rows, as `1..5`, `3` or `1,4,7`.
    #[arg(long, required_unless_present = "configs", conflicts_with = "configs")]
    pub presets: Option<String>,
    /// CSV with columns label,nodes,paths,cycles,er_prob,seed[,instances].
    #[arg(long)]
    pub configs: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Instances per grid row (capped by the row's own count).
    #[arg(long, default_value_t = 1)]
    pub instances: usize,
    /// Seed for every grid row, defaulting to the row number. The j-th
    /// instance of a row (from 0) uses seed + j.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Use the grid rows' Erdős-Rényi probabilities unchanged instead of
    /// capping them.
    #[arg(long)]
    pub full_density: bool,
    /// Restrict to these algorithms (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub algs: Vec<Algorithm>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Largest node count to enumerate.
    #[arg(long, default_value_t = gmcp_core::oracle::DEFAULT_NODE_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}
