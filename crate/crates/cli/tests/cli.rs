use std::path::{Path, PathBuf};
use std::process::Command;

use svcp::domain::default_weights;
use svcp::io::{read_results, write_instance};
use svcp::rational::SmallRatio;
use svcp::{Capability, Constants, Horizon, Instance, Location, PriorityStructure, TaskActivity, Volunteer};
use tempfile::TempDir;

fn svcp(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_svcp")).args(args).output().unwrap()
}

fn run(args: &[&str]) -> i32 {
    svcp_cli::run(std::iter::once("svcp").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Two volunteers, a top-class and a lower-class activity, 6 slots.
fn tiny(num_volunteers: usize) -> Instance {
    let slots = 6;
    let act = |priority| TaskActivity {
        task_id: 1,
        label: format!("p{priority}"),
        capability: 0,
        priority,
        demand: 1,
        window: vec![true; slots],
        location: Location::new(0, 0),
    };
    Instance::new(
        Horizon::new(slots),
        vec![Capability { label: "any".into() }],
        (0..num_volunteers).map(|_| Volunteer::new(vec![true], vec![true; slots], 0)).collect(),
        vec![act(1), act(3)],
        PriorityStructure::halle(),
        Constants {
            tau_min: 2,
            tau_max: 4,
            travel_speed_kmh: SmallRatio::from_integer(10),
            weights: default_weights(slots),
        },
    )
}

fn write_tiny(dir: &Path, name: &str, instance: &Instance) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, write_instance(instance)).unwrap();
    path
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    v.sort();
    v
}

#[test]
fn factor_flags_select_the_design_row() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let common = ["--seed", "4", "--volunteer-cap", "80", "--instances", "3"];
    let mut args = vec!["generate", "--scenario", "1", "--out", s(&a)];
    args.extend(common);
    assert_eq!(run(&args), 0);
    let mut args = vec![
        "generate", "--volunteers", "5000", "--tasks", "1", "--capprob", "0.3", "--lambda", "7", "--out", s(&b),
    ];
    args.extend(common);
    assert_eq!(run(&args), 0);
    assert_eq!(files(&a), ["manifest.json", "scenario_01_seed_4.json"]);
    assert_eq!(
        std::fs::read(a.join("scenario_01_seed_4.json")).unwrap(),
        std::fs::read(b.join("scenario_01_seed_4.json")).unwrap()
    );
}

#[test]
fn full_design_writes_every_row_and_seed() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("full");
    assert_eq!(run(&["generate", "--design", "full", "--seeds", "10", "--volunteer-cap", "20", "--out", s(&out)]), 0);
    let names = files(&out);
    assert_eq!(names.iter().filter(|n| n.starts_with("scenario_")).count(), 160);
    assert!(names.contains(&"scenario_16_seed_10.json".to_string()));
}

#[test]
fn invalid_levels_are_usage_errors() {
    let tmp = TempDir::new().unwrap();
    let out = svcp(&[
        "generate", "--volunteers", "6000", "--tasks", "1", "--capprob", "0.3", "--lambda", "7", "--out",
        s(tmp.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("allowed values: 5000, 10000"), "{err}");

    let out = svcp(&["generate", "--tasks", "1", "--out", s(tmp.path())]);
    assert_eq!(out.status.code(), Some(1));
    let out = svcp(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn both_solvers_on_a_tiny_instance() {
    let tmp = TempDir::new().unwrap();
    let inst = write_tiny(tmp.path(), "tiny.json", &tiny(2));
    let out = tmp.path().join("solved");
    let res = svcp(&["solve", "--instance", s(&inst), "--solver", "heuristic,oracle", "--trace", "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(!String::from_utf8_lossy(&res.stdout).contains("better than"));
    let rows = read_results(&std::fs::read(out.join("results.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0].solver.as_str(), rows[1].solver.as_str()), ("heuristic", "oracle"));
    assert!(rows.iter().all(|r| r.feasible && r.wall_clock_us.is_none()));
    let trace = std::fs::read_to_string(out.join("trace_heuristic.jsonl")).unwrap();
    let first: serde_json::Value = serde_json::from_str(trace.lines().next().unwrap()).unwrap();
    assert_eq!(first["iteration"], 1);
    assert!(first["outcome"] == "assigned" || first["outcome"] == "removed");
    assert!(out.join("assignment_oracle.json").exists());
}

#[test]
fn infeasible_prior_is_a_data_error() {
    let tmp = TempDir::new().unwrap();
    let mut inst = tiny(2);
    inst.prior.set(0, 0, 2);
    let path = write_tiny(tmp.path(), "bad.json", &inst);
    let res = svcp(&["solve", "--instance", s(&path), "--out", s(&tmp.path().join("o"))]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("C7"));
}

#[test]
fn oracle_refusal_has_its_own_exit_code() {
    let tmp = TempDir::new().unwrap();
    let path = write_tiny(tmp.path(), "big.json", &tiny(9));
    let res = svcp(&["solve", "--instance", s(&path), "--solver", "oracle", "--out", s(&tmp.path().join("o"))]);
    assert_eq!(res.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&res.stderr).contains("refused"));
}

fn results_csv(rows: &[(&str, [&str; 4])]) -> String {
    let mut text = String::from(
        "scenario,seed,instance,solver,of1,of2,of3,of4,of1_exact,of2_exact,of3_exact,of4_exact,wall_clock_us,evaluations,feasible\n",
    );
    for (i, (solver, v)) in rows.iter().enumerate() {
        text.push_str(&format!(
            "S01,1,{},{solver},{},{},{},{},{},{},{},{},,0,true\n",
            i + 1,
            v[0], v[1], v[2], v[3], v[0], v[1], v[2], v[3]
        ));
    }
    text
}

#[test]
fn gaps_of_hand_made_results() {
    let tmp = TempDir::new().unwrap();
    let h = tmp.path().join("h.csv");
    let o = tmp.path().join("o.csv");
    std::fs::write(&h, results_csv(&[("heuristic", ["99", "5", "0", "1/2"]), ("heuristic", ["1", "1", "1", "1"])])).unwrap();
    std::fs::write(&o, results_csv(&[("oracle", ["100", "5", "0", "1/4"])])).unwrap();
    let out = tmp.path().join("g");
    let res = svcp(&["gap", "--heuristic", s(&h), "--oracle", s(&o), "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&res.stderr).contains("instance 2 has no oracle row"));
    let text = std::fs::read_to_string(out.join("gaps.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    // the minimised zero optimum is flagged; 1/4 -> 1/2 doubles
    assert_eq!(lines[1], "S01,1,1,gap,0.01,0,0,1,1/100,0/1,0/1,1/1,false,false,true,false");
    assert!(lines[3].starts_with("S01,,,median,0.01,"));

    let same = tmp.path().join("same");
    assert_eq!(run(&["gap", "--heuristic", s(&o), "--oracle", s(&o), "--out", s(&same)]), 0);
    let text = std::fs::read_to_string(same.join("gaps.csv")).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("S01,1,1,gap,0,0,0,0,"));

    assert_eq!(run(&["gap", "--heuristic", s(&o), "--oracle", s(&o), "--epsilon", "0", "--out", s(&same)]), 2);
    assert_eq!(run(&["gap", "--heuristic", s(&o), "--oracle", s(&o), "--epsilon", "x", "--out", s(&same)]), 1);
}

#[test]
fn micro_bench_sweeps_four_points() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("bench");
    assert_eq!(run(&["bench", "--scale", "micro", "--repeat", "2", "--out", s(&out)]), 0);
    let sweep = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 5);
    let timings = std::fs::read_to_string(out.join("sweep_timings.csv")).unwrap();
    assert_eq!(timings.lines().count(), 1 + 4 * 3);
    let oracle = std::fs::read_to_string(out.join("oracle.csv")).unwrap();
    assert!(!oracle.contains(",better,"));
}

#[test]
fn scenario_solve_is_independent_of_thread_count() {
    let tmp = TempDir::new().unwrap();
    let gen = tmp.path().join("gen");
    assert_eq!(
        run(&["generate", "--scenario", "3", "--scenario", "14", "--seed", "2", "--volunteer-cap", "60", "--instances", "4", "--out", s(&gen)]),
        0
    );
    let inputs = [gen.join("scenario_03_seed_2.json"), gen.join("scenario_14_seed_2.json")];
    let solve = |threads: &str, out: &Path| {
        Command::new(env!("CARGO_BIN_EXE_svcp"))
            .env(svcp_cli::THREADS_VAR, threads)
            .args(["solve", "--scenario", s(&inputs[1]), s(&inputs[0]), "--out", s(out)])
            .output()
            .unwrap()
    };
    let one = tmp.path().join("one");
    let four = tmp.path().join("four");
    assert_eq!(solve("1", &one).status.code(), Some(0));
    assert_eq!(solve("4", &four).status.code(), Some(0));
    let a = std::fs::read(one.join("results.csv")).unwrap();
    assert_eq!(a, std::fs::read(four.join("results.csv")).unwrap());
    let rows = read_results(&a).unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!((rows[0].scenario.as_str(), rows[4].scenario.as_str()), ("S03", "S14"));
    assert!(one.join("S14_seed_2/heuristic_instance_04.json").exists());
    assert_eq!(solve("x", &four).status.code(), Some(1));
}

#[test]
fn replay_reproduces_outputs() {
    let tmp = TempDir::new().unwrap();
    let gen = tmp.path().join("gen");
    assert_eq!(run(&["generate", "--scenario", "5", "--seed", "9", "--volunteer-cap", "40", "--instances", "3", "--out", s(&gen)]), 0);
    let again = tmp.path().join("again");
    assert_eq!(run(&["replay", "--manifest", s(&gen.join("manifest.json")), "--out", s(&again)]), 0);

    // a tampered output is caught
    let path = gen.join("scenario_05_seed_9.json");
    let mut bytes = std::fs::read(&path).unwrap();
    bytes.push(b' ');
    std::fs::write(&path, bytes).unwrap();
    let manifest = std::fs::read_to_string(gen.join("manifest.json")).unwrap();
    let hash = svcp_cli::manifest::sha256_hex(&std::fs::read(&path).unwrap());
    let original = svcp_cli::manifest::read_manifest(&gen.join("manifest.json")).unwrap().outputs[0].sha256.clone();
    std::fs::write(gen.join("manifest.json"), manifest.replace(&original, &hash)).unwrap();
    let third = tmp.path().join("third");
    assert_eq!(run(&["replay", "--manifest", s(&gen.join("manifest.json")), "--out", s(&third)]), 2);
}
