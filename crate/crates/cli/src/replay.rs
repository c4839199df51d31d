use std::collections::BTreeSet;

use clap::Parser;

use crate::cli::{Cli, Command, ReplayArgs};
use crate::error::{read_file, CliError, CliResult};
use crate::manifest::{read_manifest, sha256_hex, with_output_dir};

#[derive(Debug)]
pub struct ReplayReport {
    pub identical: usize,
    /// Timing outputs, which are not expected to repeat.
    pub skipped: usize,
}

/// Re-runs the manifest's command into `args.out` and checks that every
/// deterministic output is byte-identical.
pub fn run(args: &ReplayArgs) -> CliResult<ReplayReport> {
    let manifest = read_manifest(&args.manifest)?;
    let dir = args.out.to_string_lossy().into_owned();
    let command = with_output_dir(&manifest.command, &dir)?;
    let cli = Cli::try_parse_from(std::iter::once("svcp".to_string()).chain(command.iter().cloned()))
        .map_err(|e| CliError::Usage(format!("manifest command does not parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::Usage("a replay manifest cannot be replayed".into()));
    }
    crate::execute(&cli.command, &command)?;

    let mut mismatches = Vec::new();
    let mut identical = 0;
    let mut skipped = 0;
    for out in &manifest.outputs {
        if !out.deterministic {
            skipped += 1;
            continue;
        }
        match read_file(&args.out.join(&out.path)) {
            Ok(bytes) if sha256_hex(&bytes) == out.sha256 => identical += 1,
            Ok(_) => mismatches.push(format!("{} differs", out.path)),
            Err(_) => mismatches.push(format!("{} is missing", out.path)),
        }
    }
    let fresh = read_manifest(&args.out.join(crate::manifest::MANIFEST_FILE))?;
    let before: BTreeSet<&str> = manifest.outputs.iter().map(|o| o.path.as_str()).collect();
    for extra in fresh.outputs.iter().filter(|o| !before.contains(o.path.as_str())) {
        mismatches.push(format!("{} was not in the original run", extra.path));
    }
    if fresh.config_hash != manifest.config_hash {
        mismatches.push("configuration hash differs".into());
    }
    if !mismatches.is_empty() {
        return Err(CliError::Data(format!("replay differs: {}", mismatches.join("; "))));
    }
    println!("replay: {identical} output(s) identical, {skipped} timing output(s) not compared");
    Ok(ReplayReport { identical, skipped })
}
