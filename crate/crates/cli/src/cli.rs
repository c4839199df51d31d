use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "svcp", version, about = "Spontaneous volunteer coordination: scenarios, solvers and reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write scenario documents for design rows and seeds.
    Generate(GenerateArgs),
    /// Solve an instance, or roll the horizon over scenarios.
    Solve(SolveArgs),
    /// Relative gaps between heuristic and oracle result rows.
    Gap(GapArgs),
    /// Evaluation counts and timings, including a sweep over pool sizes.
    Bench(BenchArgs),
    /// Re-run a manifest into a fresh directory and compare the outputs.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Design {
    /// All 16 rows of the factorial design.
    Full,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, conflicts_with_all = ["scenario", "volunteers", "tasks", "capprob", "lambda"])]
    pub design: Option<Design>,
    /// Design row, 1..=16; repeatable.
    #[arg(long, conflicts_with_all = ["volunteers", "tasks", "capprob", "lambda"])]
    pub scenario: Vec<u32>,
    /// Maximum pool size (5000 or 10000).
    #[arg(long)]
    pub volunteers: Option<u32>,
    /// Tasks added per instance (1 or 2).
    #[arg(long)]
    pub tasks: Option<u32>,
    /// Capability probability (0.3 or 0.5).
    #[arg(long)]
    pub capprob: Option<String>,
    /// Arrival rate (7 or 11).
    #[arg(long)]
    pub lambda: Option<u32>,
    /// Seeds 1..=N.
    #[arg(long, conflicts_with = "seed")]
    pub seeds: Option<u64>,
    /// Explicit seed; repeatable.
    #[arg(long)]
    pub seed: Vec<u64>,
    /// Reduced-scale ceiling on the pool.
    #[arg(long)]
    pub volunteer_cap: Option<u32>,
    /// Instances per scenario (default 20).
    #[arg(long)]
    pub instances: Option<u32>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    Heuristic,
    Oracle,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Heuristic => "heuristic",
            SolverKind::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance document.
    #[arg(long, required_unless_present = "scenario", conflicts_with = "scenario")]
    pub instance: Option<PathBuf>,
    /// Scenario documents; each is solved over its full rolling horizon.
    #[arg(long, num_args = 1..)]
    pub scenario: Vec<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "heuristic")]
    pub solver: Vec<SolverKind>,
    /// Write the heuristic's step records.
    #[arg(long)]
    pub trace: bool,
    /// Fill the wall-clock column; outputs then differ between runs.
    #[arg(long)]
    pub timing: bool,
    /// Search states the oracle may visit per instance.
    #[arg(long)]
    pub max_states: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    /// Result CSV of the heuristic.
    #[arg(long)]
    pub heuristic: PathBuf,
    /// Result CSV of the reference solver.
    #[arg(long)]
    pub oracle: PathBuf,
    /// Threshold below which a minimised optimum counts as zero, e.g.
    /// `1/1000000000`.
    #[arg(long, default_value = "1/1000000000")]
    pub epsilon: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Micro,
    Desk,
    Full,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "desk")]
    pub scale: Scale,
    /// Timed samples per point.
    #[arg(long, default_value_t = 3)]
    pub repeat: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Fresh directory for the re-run.
    #[arg(long)]
    pub out: PathBuf,
}
