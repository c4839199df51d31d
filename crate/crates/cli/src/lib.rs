//! Batch front end over the `svcp` library: scenario generation, rolling
//! horizon solving, gap grading, benchmarks and manifest replay.
//!
//! Every batch command writes into an explicit `--out` directory together
//! with a `manifest.json` that [`replay`] can re-run.

pub mod bench;
mod cli;
mod error;
pub mod gap;
pub mod generate;
pub mod manifest;
pub mod replay;
pub mod solve;
mod threads;

use std::ffi::OsString;

use clap::Parser;

pub use cli::{BenchArgs, Cli, Command, Design, GapArgs, GenerateArgs, ReplayArgs, Scale, SolveArgs, SolverKind};
pub use error::{CliError, CliResult};
pub use threads::THREADS_VAR;

/// Parses and runs one command line, returning the process exit code:
/// 0 success, 1 usage, 2 data defect or infeasible output, 3 solver
/// refusal or exhausted resources.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli.command, &command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("svcp: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command; `command` is its argument list as recorded in
/// the manifest.
pub fn execute(cmd: &Command, command: &[String]) -> CliResult<()> {
    let pool = threads::pool()?;
    pool.install(|| match cmd {
        Command::Generate(a) => generate::run(a, command).map(|_| ()),
        Command::Solve(a) => solve::run(a, command).map(|_| ()),
        Command::Gap(a) => gap::run(a, command).map(|_| ()),
        Command::Bench(a) => bench::run(a, command).map(|_| ()),
        Command::Replay(a) => replay::run(a).map(|_| ()),
    })
}
