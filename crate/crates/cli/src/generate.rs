use rayon::prelude::*;
use svcp::io::write_scenario;
use svcp::scenario::{
    generate_scenario, ScenarioConfig, ADDED_TASK_LEVELS, CAPABILITY_PROBABILITY_LEVELS, LAMBDA_LEVELS,
    VOLUNTEER_LEVELS,
};

use crate::cli::{Design, GenerateArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::{OutputSet, RunManifest};

pub fn scenario_file_name(config: &ScenarioConfig) -> String {
    match config.design_id() {
        Some(id) => format!("scenario_{id:02}_seed_{}.json", config.seed),
        None => format!("scenario_custom_seed_{}.json", config.seed),
    }
}

fn level<T: PartialEq + std::fmt::Display + Copy>(flag: &str, value: T, allowed: &[T]) -> CliResult<usize> {
    allowed.iter().position(|&x| x == value).ok_or_else(|| {
        let list: Vec<String> = allowed.iter().map(|x| x.to_string()).collect();
        CliError::Usage(format!("--{flag} {value} is not a design level; allowed values: {}", list.join(", ")))
    })
}

/// Design rows selected by the flags.
fn design_rows(args: &GenerateArgs) -> CliResult<Vec<u32>> {
    let factors = [
        args.volunteers.is_some(),
        args.tasks.is_some(),
        args.capprob.is_some(),
        args.lambda.is_some(),
    ];
    if args.design == Some(Design::Full) {
        return Ok((1..=16).collect());
    }
    if !args.scenario.is_empty() {
        let mut ids = args.scenario.clone();
        if let Some(&bad) = ids.iter().find(|id| !(1..=16).contains(*id)) {
            return Err(CliError::Usage(format!("--scenario {bad} is outside 1..=16")));
        }
        ids.sort_unstable();
        ids.dedup();
        return Ok(ids);
    }
    if factors.iter().all(|&f| !f) {
        return Err(CliError::Usage(
            "choose --design full, --scenario ID, or all of --volunteers, --tasks, --capprob and --lambda".into(),
        ));
    }
    if factors.iter().any(|&f| !f) {
        return Err(CliError::Usage(
            "--volunteers, --tasks, --capprob and --lambda must be given together".into(),
        ));
    }
    let capprob = args.capprob.as_deref().unwrap_or_default();
    let p: f64 = capprob
        .parse()
        .map_err(|_| CliError::Usage(format!("--capprob {capprob:?} is not a number; allowed values: 0.3, 0.5")))?;
    let bits = [
        level("volunteers", args.volunteers.unwrap_or_default(), &VOLUNTEER_LEVELS)?,
        level("tasks", args.tasks.unwrap_or_default(), &ADDED_TASK_LEVELS)?,
        level("capprob", p, &CAPABILITY_PROBABILITY_LEVELS)?,
        level("lambda", args.lambda.unwrap_or_default(), &LAMBDA_LEVELS)?,
    ];
    let id = bits.iter().fold(0, |acc, &b| acc << 1 | b as u32) + 1;
    Ok(vec![id])
}

pub fn seeds(args: &GenerateArgs) -> CliResult<Vec<u64>> {
    match args.seeds {
        Some(0) => Err(CliError::Usage("--seeds must be at least 1".into())),
        Some(n) => Ok((1..=n).collect()),
        None if args.seed.is_empty() => Ok(vec![1]),
        None => {
            let mut s = args.seed.clone();
            s.sort_unstable();
            s.dedup();
            Ok(s)
        }
    }
}

pub fn configs(args: &GenerateArgs) -> CliResult<Vec<ScenarioConfig>> {
    let seeds = seeds(args)?;
    let mut out = Vec::new();
    for id in design_rows(args)? {
        for &seed in &seeds {
            let mut cfg = ScenarioConfig::design(id, seed)?;
            cfg.volunteer_cap = args.volunteer_cap;
            if let Some(n) = args.instances {
                cfg.num_instances = n;
            }
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            out.push(cfg);
        }
    }
    Ok(out)
}

pub fn run(args: &GenerateArgs, command: &[String]) -> CliResult<RunManifest> {
    let configs = configs(args)?;
    let docs: Vec<CliResult<(String, Vec<u8>)>> = configs
        .par_iter()
        .map(|cfg| {
            let scenario = generate_scenario(cfg)?;
            Ok((scenario_file_name(cfg), write_scenario(&scenario)))
        })
        .collect();
    let mut outputs = OutputSet::new(&args.out);
    for doc in docs {
        let (name, bytes) = doc?;
        outputs.write(&name, &bytes)?;
    }
    let config = serde_json::to_value(&configs).expect("configs serialize");
    let manifest = outputs.finish(command, &config, seeds(args)?)?;
    println!("wrote {} scenario(s) to {}", configs.len(), args.out.display());
    Ok(manifest)
}
