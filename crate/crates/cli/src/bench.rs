//! Evaluation counts and timings: a sweep doubling the pool at fixed
//! activities and horizon, and heuristic-versus-oracle runs on micro
//! instances.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use svcp::heuristic::{solve_with, SolveOptions};
use svcp::oracle::{default_epsilon, relative_gap, solve_exact, OracleLimits};
use svcp::rational::{format_decimal, format_exact, Rational};
use svcp::scenario::synthetic::{random_instance, SyntheticConfig};
use svcp::scenario::{halle_catalog, sample_volunteer, RollingState, Scenario, ScenarioConfig};
use svcp::{lex_compare, objective_vector, Error, Instance};

use crate::cli::{BenchArgs, Scale};
use crate::error::{CliError, CliResult};
use crate::manifest::{OutputSet, RunManifest};

pub const SWEEP_ACTIVITIES: usize = 20;
pub const SWEEP_SLOTS: u32 = 48;

pub fn sweep_points(scale: Scale) -> Vec<usize> {
    let (first, n) = match scale {
        Scale::Micro => (50, 4),
        Scale::Desk => (250, 4),
        Scale::Full => (250, 7),
    };
    (0..n).map(|i| first << i).collect()
}

pub fn oracle_instance_count(scale: Scale) -> usize {
    match scale {
        Scale::Micro => 20,
        Scale::Desk => 100,
        Scale::Full => 300,
    }
}

/// `volunteers` volunteers drawn as in design row 1, all present at the
/// start, against the first 20 catalog activities over 48 slots.
pub fn sweep_instance(volunteers: usize, seed: u64) -> CliResult<Instance> {
    let catalog = halle_catalog();
    let mut config = ScenarioConfig::design(1, seed)?;
    config.num_instances = 1;
    config.num_slots = SWEEP_SLOTS;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = (0..volunteers)
        .map(|_| sample_volunteer(&config, catalog.capabilities.len(), 0, &mut rng))
        .collect();
    let mut tasks = Vec::new();
    let mut count = 0;
    for task in &catalog.tasks {
        if count >= SWEEP_ACTIVITIES {
            break;
        }
        tasks.push(task.task_id);
        count += task.activities.len();
    }
    let scenario = Scenario {
        config,
        volunteers: pool,
        task_arrivals: vec![tasks],
    };
    let mut instance = RollingState::new(&scenario).instance(0)?;
    instance.activities.truncate(SWEEP_ACTIVITIES);
    instance.prior = instance.empty_assignment();
    Ok(instance)
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub volunteers: usize,
    pub activities: usize,
    pub slots: usize,
    /// `|A| |T| |V|`.
    pub bound: u64,
    pub evaluations: u64,
    pub iterations: u64,
    pub samples: Vec<Duration>,
}

fn median_duration(samples: &[Duration]) -> Duration {
    let mut s = samples.to_vec();
    s.sort();
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2
    }
}

impl SweepPoint {
    pub fn median_wall_clock(&self) -> Duration {
        median_duration(&self.samples)
    }
}

const NO_TRACE: SolveOptions = SolveOptions {
    record_trace: false,
    reuse_candidates: true,
};

pub fn run_sweep(points: &[usize], repeat: u32, seed: u64) -> CliResult<Vec<SweepPoint>> {
    let mut out = Vec::with_capacity(points.len());
    for &v in points {
        let instance = sweep_instance(v, seed)?;
        let mut samples = Vec::new();
        let mut counts = None;
        for _ in 0..repeat.max(1) {
            let clock = Instant::now();
            let sol = solve_with(&instance, NO_TRACE)?;
            samples.push(clock.elapsed());
            let c = (sol.evaluations, sol.iterations);
            if *counts.get_or_insert(c) != c {
                return Err(CliError::Data(format!("evaluation counts differ between repeats at {v} volunteers")));
            }
        }
        let (evaluations, iterations) = counts.expect("at least one repeat");
        let (a, t) = (instance.num_activities(), instance.num_slots());
        out.push(SweepPoint {
            volunteers: v,
            activities: a,
            slots: t,
            bound: (a * t * v) as u64,
            evaluations,
            iterations,
            samples,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct OracleComparison {
    pub instance: usize,
    pub volunteers: usize,
    pub activities: usize,
    pub slots: usize,
    pub heuristic_evaluations: u64,
    /// `None` when the search budget ran out.
    pub oracle_states: Option<u64>,
    pub comparison: Option<Ordering>,
    pub top_gap: Option<Rational>,
    pub heuristic_samples: Vec<Duration>,
    pub oracle_samples: Vec<Duration>,
}

impl OracleComparison {
    /// Median oracle time over median heuristic time.
    pub fn speedup(&self) -> Option<f64> {
        if self.oracle_samples.is_empty() {
            return None;
        }
        let h = median_duration(&self.heuristic_samples).as_secs_f64();
        let o = median_duration(&self.oracle_samples).as_secs_f64();
        (h > 0.0).then(|| o / h)
    }
}

pub fn run_oracle_comparison(count: usize, repeat: u32, seed: u64) -> CliResult<Vec<OracleComparison>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limits = OracleLimits::default();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let instance = random_instance(&SyntheticConfig::micro(), &mut rng);
        let mut heuristic_samples = Vec::new();
        let mut heur = None;
        for _ in 0..repeat.max(1) {
            let clock = Instant::now();
            let sol = solve_with(&instance, NO_TRACE)?;
            heuristic_samples.push(clock.elapsed());
            heur = Some(sol);
        }
        let heur = heur.expect("at least one repeat");
        let mut oracle_samples = Vec::new();
        let mut exact = None;
        for _ in 0..repeat.max(1) {
            let clock = Instant::now();
            match solve_exact(&instance, &limits) {
                Ok(sol) => {
                    oracle_samples.push(clock.elapsed());
                    exact = Some(sol);
                }
                Err(Error::ResourceExhausted(_)) => {
                    oracle_samples.clear();
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
        let hv = objective_vector(&instance, &heur.assignment);
        let (comparison, top_gap) = match &exact {
            Some(sol) => (
                Some(lex_compare(&hv, &sol.objectives)?),
                Some(relative_gap(&hv, &sol.objectives, &default_epsilon())?.gaps[0].clone()),
            ),
            None => (None, None),
        };
        out.push(OracleComparison {
            instance: i + 1,
            volunteers: instance.num_volunteers(),
            activities: instance.num_activities(),
            slots: instance.num_slots(),
            heuristic_evaluations: heur.evaluations,
            oracle_states: exact.as_ref().map(|s| s.states),
            comparison,
            top_gap,
            heuristic_samples,
            oracle_samples,
        });
    }
    Ok(out)
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let fail = |e: csv::Error| CliError::Data(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::Data(format!("csv: {}", e.error())))
}

fn micros(d: Duration) -> String {
    d.as_micros().to_string()
}

fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(num.into(), den.into())
}

#[derive(Debug)]
pub struct BenchReport {
    pub sweep: Vec<SweepPoint>,
    pub oracle: Vec<OracleComparison>,
    pub manifest: RunManifest,
}

pub fn run(args: &BenchArgs, command: &[String]) -> CliResult<BenchReport> {
    if args.repeat == 0 {
        return Err(CliError::Usage("--repeat must be at least 1".into()));
    }
    let points = sweep_points(args.scale);
    let sweep = run_sweep(&points, args.repeat, args.seed)?;
    let oracle = run_oracle_comparison(oracle_instance_count(args.scale), args.repeat, args.seed)?;

    let mut rows = Vec::new();
    for (i, p) in sweep.iter().enumerate() {
        let (r, r_exact) = match i.checked_sub(1).map(|j| ratio(p.evaluations, sweep[j].evaluations.max(1))) {
            Some(r) => (format_decimal(&r, 12), format_exact(&r)),
            None => (String::new(), String::new()),
        };
        rows.push(vec![
            p.volunteers.to_string(),
            p.activities.to_string(),
            p.slots.to_string(),
            p.bound.to_string(),
            p.evaluations.to_string(),
            p.iterations.to_string(),
            r,
            r_exact,
        ]);
    }
    let sweep_csv = csv_bytes(
        &["volunteers", "activities", "slots", "bound", "evaluations", "iterations", "ratio", "ratio_exact"],
        &rows,
    )?;

    let mut rows = Vec::new();
    for p in &sweep {
        for (k, s) in p.samples.iter().enumerate() {
            rows.push(vec![p.volunteers.to_string(), (k + 1).to_string(), micros(*s)]);
        }
        rows.push(vec![p.volunteers.to_string(), "median".into(), micros(p.median_wall_clock())]);
    }
    let sweep_timing_csv = csv_bytes(&["volunteers", "sample", "wall_clock_us"], &rows)?;

    let verdict = |o: Option<Ordering>| match o {
        Some(Ordering::Less) => "worse",
        Some(Ordering::Equal) => "equal",
        Some(Ordering::Greater) => "better",
        None => "",
    };
    let rows: Vec<Vec<String>> = oracle
        .iter()
        .map(|c| {
            vec![
                c.instance.to_string(),
                c.volunteers.to_string(),
                c.activities.to_string(),
                c.slots.to_string(),
                c.heuristic_evaluations.to_string(),
                c.oracle_states.map(|s| s.to_string()).unwrap_or_default(),
                verdict(c.comparison).into(),
                c.top_gap.as_ref().map(format_exact).unwrap_or_default(),
            ]
        })
        .collect();
    let oracle_csv = csv_bytes(
        &[
            "instance",
            "volunteers",
            "activities",
            "slots",
            "heuristic_evaluations",
            "oracle_states",
            "heuristic_vs_oracle",
            "gap1_exact",
        ],
        &rows,
    )?;
    let rows: Vec<Vec<String>> = oracle
        .iter()
        .map(|c| {
            vec![
                c.instance.to_string(),
                micros(median_duration(&c.heuristic_samples)),
                if c.oracle_samples.is_empty() { String::new() } else { micros(median_duration(&c.oracle_samples)) },
                c.speedup().map(|s| format!("{s:.3}")).unwrap_or_default(),
            ]
        })
        .collect();
    let oracle_timing_csv = csv_bytes(&["instance", "heuristic_us", "oracle_us", "speedup"], &rows)?;

    let mut outputs = OutputSet::new(&args.out);
    outputs.write("sweep.csv", &sweep_csv)?;
    outputs.write("oracle.csv", &oracle_csv)?;
    outputs.write_timing("sweep_timings.csv", &sweep_timing_csv)?;
    outputs.write_timing("oracle_timings.csv", &oracle_timing_csv)?;
    let config = serde_json::json!({
        "scale": format!("{:?}", args.scale).to_lowercase(),
        "repeat": args.repeat,
        "points": points,
        "activities": SWEEP_ACTIVITIES,
        "slots": SWEEP_SLOTS,
        "oracle_instances": oracle_instance_count(args.scale),
    });
    let manifest = outputs.finish(command, &config, vec![args.seed])?;

    for pair in sweep.windows(2) {
        println!(
            "V {} -> {}: evaluations x{:.3}, median time x{:.3}",
            pair[0].volunteers,
            pair[1].volunteers,
            pair[1].evaluations as f64 / pair[0].evaluations.max(1) as f64,
            pair[1].median_wall_clock().as_secs_f64() / pair[0].median_wall_clock().as_secs_f64().max(1e-9)
        );
    }
    let mut speedups: Vec<f64> = oracle.iter().filter_map(OracleComparison::speedup).collect();
    speedups.sort_by(f64::total_cmp);
    if !speedups.is_empty() {
        println!("median speedup over the oracle: {:.1}x on {} instance(s)", speedups[speedups.len() / 2], speedups.len());
    }
    Ok(BenchReport { sweep, oracle, manifest })
}
