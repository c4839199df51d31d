use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use svcp::domain::check_feasibility;
use svcp::heuristic::SolveOptions;
use svcp::io::{read_instance, read_scenario, write_assignment, write_results, write_trace, ResultRow};
use svcp::oracle::OracleLimits;
use svcp::scenario::{roll_horizon, Scenario};
use svcp::solver::{ExactOracle, Heuristic, Solver};
use svcp::{lex_compare, objective_vector};

use crate::cli::{SolveArgs, SolverKind};
use crate::error::{read_file, CliError, CliResult};
use crate::manifest::{sha256_hex, OutputSet, RunManifest};

pub const RESULTS_FILE: &str = "results.csv";

#[derive(Debug)]
pub struct SolveReport {
    pub rows: Vec<ResultRow>,
    pub manifest: RunManifest,
}

pub fn make_solver(kind: SolverKind, trace: bool, max_states: Option<u64>) -> Box<dyn Solver + Send + Sync> {
    match kind {
        SolverKind::Heuristic => Box::new(Heuristic {
            options: SolveOptions {
                record_trace: trace,
                reuse_candidates: true,
            },
        }),
        SolverKind::Oracle => {
            let mut limits = OracleLimits::default();
            if let Some(n) = max_states {
                limits.max_states = n;
            }
            Box::new(ExactOracle { limits })
        }
    }
}

/// `S01`..`S16` for design rows, otherwise the file stem.
pub fn scenario_label(scenario: &Scenario, path: &Path) -> String {
    match scenario.config.design_id() {
        Some(id) => format!("S{id:02}"),
        None => file_stem(path),
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned())
}

struct Produced {
    rows: Vec<ResultRow>,
    files: Vec<(String, Vec<u8>)>,
}

fn solve_instance(path: &Path, args: &SolveArgs) -> CliResult<Produced> {
    let instance = read_instance(&read_file(path)?).map_err(|e| CliError::from(e).context(path.display()))?;
    let label = file_stem(path);
    let mut rows = Vec::new();
    let mut files = Vec::new();
    let mut vectors = Vec::new();
    for &kind in &args.solver {
        let solver = make_solver(kind, args.trace, args.max_states);
        let clock = Instant::now();
        let out = solver
            .solve(&instance)
            .map_err(|e| CliError::from(e).context(format!("{} on {}", kind.name(), path.display())))?;
        let elapsed = clock.elapsed();
        let feasible = check_feasibility(&instance, &out.assignment)?.is_empty();
        let objectives = objective_vector(&instance, &out.assignment);
        rows.push(ResultRow {
            scenario: label.clone(),
            seed: 0,
            instance: 1,
            solver: kind.name().into(),
            objectives: objectives.values(),
            wall_clock_us: args.timing.then_some(elapsed.as_micros() as u64),
            evaluations: out.evaluations,
            feasible,
        });
        files.push((format!("assignment_{}.json", kind.name()), write_assignment(&out.assignment)));
        if args.trace && kind == SolverKind::Heuristic {
            files.push((format!("trace_{}.jsonl", kind.name()), write_trace(&out.trace)));
        }
        vectors.push((kind, objectives));
    }
    if let (Some((_, h)), Some((_, o))) = (
        vectors.iter().find(|(k, _)| *k == SolverKind::Heuristic),
        vectors.iter().find(|(k, _)| *k == SolverKind::Oracle),
    ) {
        let verdict = match lex_compare(h, o)? {
            std::cmp::Ordering::Less => "worse than",
            std::cmp::Ordering::Equal => "equal to",
            std::cmp::Ordering::Greater => "better than",
        };
        println!("heuristic is lexicographically {verdict} the oracle");
    }
    Ok(Produced { rows, files })
}

fn solve_scenario(path: &Path, scenario: &Scenario, kind: SolverKind, args: &SolveArgs) -> CliResult<Produced> {
    let label = scenario_label(scenario, path);
    let seed = scenario.config.seed;
    let solver = make_solver(kind, args.trace, args.max_states);
    let result = roll_horizon(scenario, solver.as_ref());
    if let Some((i, e)) = result.failure {
        return Err(CliError::from(e).context(format!(
            "{label} seed {seed} instance {} ({})",
            i + 1,
            kind.name()
        )));
    }
    let dir = format!("{label}_seed_{seed}");
    let mut rows = Vec::new();
    let mut files = Vec::new();
    for out in &result.outcomes {
        let n = out.index + 1;
        rows.push(ResultRow {
            scenario: label.clone(),
            seed,
            instance: n,
            solver: kind.name().into(),
            objectives: out.objectives.values(),
            wall_clock_us: args.timing.then_some(out.wall_clock.as_micros() as u64),
            evaluations: out.evaluations,
            feasible: out.feasible,
        });
        files.push((format!("{dir}/{}_instance_{n:02}.json", kind.name()), write_assignment(&out.assignment)));
        if args.trace && kind == SolverKind::Heuristic {
            files.push((format!("{dir}/{}_instance_{n:02}.jsonl", kind.name()), write_trace(&out.trace)));
        }
    }
    Ok(Produced { rows, files })
}

pub fn run(args: &SolveArgs, command: &[String]) -> CliResult<SolveReport> {
    if args.solver.is_empty() {
        return Err(CliError::Usage("--solver needs at least one of heuristic, oracle".into()));
    }
    let mut solvers = args.solver.clone();
    solvers.dedup();
    let inputs: Vec<&Path> = match &args.instance {
        Some(p) => vec![p.as_path()],
        None => args.scenario.iter().map(|p| p.as_path()).collect(),
    };
    let mut hashes = Vec::new();
    let mut produced = Vec::new();
    let mut seeds = Vec::new();
    if let Some(path) = &args.instance {
        hashes.push(sha256_hex(&read_file(path)?));
        produced.push(solve_instance(path, args)?);
    } else {
        let mut scenarios = Vec::new();
        for path in &inputs {
            let bytes = read_file(path)?;
            hashes.push(sha256_hex(&bytes));
            let sc = read_scenario(&bytes).map_err(|e| CliError::from(e).context(path.display()))?;
            seeds.push(sc.config.seed);
            scenarios.push((*path, sc));
        }
        let mut keys: Vec<(String, u64)> = scenarios.iter().map(|(p, s)| (scenario_label(s, p), s.config.seed)).collect();
        keys.sort();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(CliError::Usage(format!("scenario {} seed {} is given twice", w[0].0, w[0].1)));
        }
        let jobs: Vec<(usize, SolverKind)> = (0..scenarios.len())
            .flat_map(|i| solvers.iter().map(move |&k| (i, k)))
            .collect();
        let results: Vec<CliResult<Produced>> = jobs
            .par_iter()
            .map(|&(i, kind)| solve_scenario(scenarios[i].0, &scenarios[i].1, kind, args))
            .collect();
        for r in results {
            produced.push(r?);
        }
        seeds.sort_unstable();
        seeds.dedup();
    }

    let order = |name: &str| solvers.iter().position(|k| k.name() == name);
    let mut rows: Vec<ResultRow> = produced.iter().flat_map(|p| p.rows.iter().cloned()).collect();
    rows.sort_by(|a, b| a.key().cmp(&b.key()).then(order(&a.solver).cmp(&order(&b.solver))));
    let mut files: Vec<&(String, Vec<u8>)> = produced.iter().flat_map(|p| &p.files).collect();
    files.sort_by(|a, b| a.0.cmp(&b.0));

    let num_objectives = rows.first().map_or(4, |r| r.objectives.len());
    let csv = write_results(&rows, num_objectives)?;
    let mut outputs = OutputSet::new(&args.out);
    for (name, bytes) in files {
        outputs.write(name, bytes)?;
    }
    if args.timing {
        outputs.write_timing(RESULTS_FILE, &csv)?;
    } else {
        outputs.write(RESULTS_FILE, &csv)?;
    }
    let config = serde_json::json!({
        "inputs": inputs.iter().zip(&hashes).map(|(p, h)| serde_json::json!({"path": p.display().to_string(), "sha256": h})).collect::<Vec<_>>(),
        "solvers": solvers.iter().map(|k| k.name()).collect::<Vec<_>>(),
        "trace": args.trace,
        "timing": args.timing,
        "max_states": args.max_states,
    });
    let manifest = outputs.finish(command, &config, seeds)?;

    let infeasible: Vec<String> = rows
        .iter()
        .filter(|r| !r.feasible)
        .map(|r| format!("{} seed {} instance {} ({})", r.scenario, r.seed, r.instance, r.solver))
        .collect();
    println!("solved {} instance(s); results in {}", rows.len(), args.out.join(RESULTS_FILE).display());
    if !infeasible.is_empty() {
        return Err(CliError::Data(format!("infeasible assignment(s): {}", infeasible.join(", "))));
    }
    Ok(SolveReport { rows, manifest })
}
