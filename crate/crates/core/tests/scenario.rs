mod common;

use common::rng;
use proptest::prelude::*;
use sha2::{Digest, Sha256};
use svcp::domain::{check_feasibility, validate_instance};
use svcp::io::write_scenario;
use svcp::scenario::{
    generate_scenario, halle_catalog, roll_horizon_with, sample_arrivals, RollingState, ScenarioConfig,
    HALLE_CATALOG_JSON,
};
use svcp::solver::Heuristic;

const CATALOG_SHA256: &str = "eb2aa0f2d7cff50d882a3c5b29f4509795da44787600634e215925672541c8aa";

fn demands(task: u32) -> Vec<(String, u32)> {
    halle_catalog()
        .task(task)
        .unwrap()
        .activities
        .iter()
        .map(|a| (a.label.clone(), a.demand))
        .collect()
}

fn labelled(rows: &[(&str, u32)]) -> Vec<(String, u32)> {
    rows.iter().map(|&(l, d)| (l.to_string(), d)).collect()
}

#[test]
fn catalog_matches_the_published_tables() {
    let cat = halle_catalog();
    assert_eq!(cat.tasks.len(), 27);
    assert_eq!(
        demands(11),
        labelled(&[("On-site documentation", 9), ("Carrying sandbags", 440), ("Meal distribution", 44)])
    );
    assert_eq!(
        demands(17),
        labelled(&[
            ("On-site documentation", 8),
            ("Filling sandbags", 90),
            ("Carrying sandbags", 270),
            ("Meal distribution", 36)
        ])
    );
    assert_eq!(
        demands(18),
        labelled(&[
            ("On-site documentation", 22),
            ("Filling sandbags", 270),
            ("Carrying sandbags", 810),
            ("Meal distribution", 108)
        ])
    );
    assert_eq!(
        demands(2),
        labelled(&[("On-site documentation", 2), ("Carrying sandbags", 96), ("Meal distribution", 10)])
    );
    let sandbags = cat.activity_types.iter().find(|t| t.label == "Carrying sandbags").unwrap();
    assert_eq!(cat.capabilities[sandbags.capability].label, "Heavy physical work");
    assert_eq!(cat.capability_id("Heavy physical work"), Some(0));
    assert_eq!(cat.num_activities(), 85);
    assert_eq!(cat.total_demand(), 3030);
}

#[test]
fn catalog_asset_is_unchanged() {
    let digest = Sha256::digest(HALLE_CATALOG_JSON.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(hex, CATALOG_SHA256);
}

#[test]
fn catalog_priorities_cover_both_classes() {
    let cat = halle_catalog();
    for p in 1..=3 {
        assert!(cat.tasks.iter().any(|t| t.priority == p));
    }
    assert!(cat.tasks.iter().all(|t| (1..=3).contains(&t.priority)));
}

#[test]
fn arrivals_are_clamped() {
    let mut r = rng(1);
    assert_eq!(sample_arrivals(7.0, 30.0, 0, &mut r).unwrap(), 0);
    for _ in 0..200 {
        assert!(sample_arrivals(11.0, 30.0, 100, &mut r).unwrap() <= 100);
    }
}

#[test]
fn arrival_mean_is_lambda_times_scale() {
    let mut r = rng(2);
    let n = 10_000;
    let total: u64 = (0..n).map(|_| sample_arrivals(7.0, 30.0, u64::MAX, &mut r).unwrap()).sum();
    let mean = total as f64 / n as f64;
    assert!((mean - 210.0).abs() / 210.0 < 0.02, "mean {mean}");
    // three standard errors of a Poisson(210) sample mean
    assert!((mean - 210.0).abs() < 3.0 * (210.0f64 / n as f64).sqrt());
}

#[test]
fn design_rows_follow_the_factor_table() {
    let row = |id| ScenarioConfig::design(id, 0).unwrap();
    let s1 = row(1);
    assert_eq!(
        (s1.max_volunteers, s1.added_tasks_per_instance, s1.capability_probability, s1.arrival_lambda),
        (5000, 1, 0.3, 7)
    );
    let s16 = row(16);
    assert_eq!(
        (s16.max_volunteers, s16.added_tasks_per_instance, s16.capability_probability, s16.arrival_lambda),
        (10000, 2, 0.5, 11)
    );
    let s6 = row(6);
    assert_eq!(
        (s6.max_volunteers, s6.added_tasks_per_instance, s6.capability_probability, s6.arrival_lambda),
        (5000, 2, 0.3, 11)
    );
    for id in 1..=16 {
        assert_eq!(row(id).design_id(), Some(id));
    }
    assert!(ScenarioConfig::design(17, 0).is_err());
    assert_eq!(16 * 10 * row(1).num_instances, 3200);
}

#[test]
fn span_covers_twenty_half_hour_steps_and_a_day() {
    let cfg = ScenarioConfig::design(1, 0).unwrap();
    assert_eq!(cfg.span_minutes(), 33 * 60 + 30);
}

#[test]
fn generation_is_reproducible() {
    let cfg = ScenarioConfig::design(7, 42).unwrap();
    let a = write_scenario(&generate_scenario(&cfg).unwrap());
    let b = write_scenario(&generate_scenario(&cfg).unwrap());
    assert_eq!(a, b);
    let other = write_scenario(&generate_scenario(&ScenarioConfig::design(7, 43).unwrap()).unwrap());
    assert_ne!(a, other);
}

#[test]
fn tasks_arrive_without_repetition_until_the_catalog_runs_out() {
    let cfg = ScenarioConfig::design(16, 3).unwrap();
    let sc = generate_scenario(&cfg).unwrap();
    let all: Vec<u32> = sc.tasks_up_to(cfg.num_instances - 1).collect();
    assert_eq!(all.len(), 27);
    let mut dedup = all.clone();
    dedup.sort();
    dedup.dedup();
    assert_eq!(dedup.len(), 27);
    assert_eq!(sc.task_arrivals[0].len(), 8);
    assert_eq!(sc.task_arrivals[1].len(), 2);
}

fn small_config(id: u32, seed: u64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::design(id, seed).unwrap();
    cfg.volunteer_cap = Some(150);
    cfg.num_instances = 6;
    cfg
}

#[test]
fn single_instance_scenario_has_no_carry_over() {
    let mut cfg = small_config(1, 5);
    cfg.num_instances = 1;
    let sc = generate_scenario(&cfg).unwrap();
    let state = RollingState::new(&sc);
    let inst = state.instance(0).unwrap();
    assert!(inst.prior.is_empty());
    let res = roll_horizon_with(&sc, &Heuristic::default(), |_, _| {});
    assert_eq!(res.outcomes.len(), 1);
    assert!(res.completed());
}

#[test]
fn carried_assignments_are_the_shifted_solution() {
    let cfg = small_config(4, 9);
    let sc = generate_scenario(&cfg).unwrap();
    let mut previous: Option<svcp::Assignment> = None;
    let mut pool = 0;
    let res = roll_horizon_with(&sc, &Heuristic::default(), |inst, out| {
        assert!(validate_instance(inst).is_empty());
        assert!(check_feasibility(inst, &inst.prior).unwrap().is_empty());
        assert!(out.feasible);
        for (v, sv) in sc.volunteers[..inst.num_volunteers()].iter().enumerate() {
            let elapsed = out.index - sv.arrival_instance;
            assert_eq!(inst.volunteers[v].initial_travel, 2u32.saturating_sub(elapsed));
        }
        assert!(inst.num_volunteers() >= pool);
        pool = inst.num_volunteers();
        if let Some(prev) = &previous {
            let (nv, na, nt) = prev.dims();
            for v in 0..nv {
                for a in 0..na {
                    for t in 1..nt {
                        assert_eq!(prev.get(v, a, t), inst.prior.get(v, a, t - 1));
                    }
                }
            }
            // the new horizon slot starts empty
            assert!((0..inst.num_volunteers()).all(|v| inst.prior.activity_at(v, nt - 1).is_none()));
        }
        previous = Some(out.assignment.clone());
    });
    assert!(res.failure.is_none(), "{:?}", res.failure);
    assert_eq!(res.outcomes.len(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn pools_grow_within_the_cap_and_instances_stay_valid(id in 1u32..=16, seed in any::<u64>()) {
        let cfg = small_config(id, seed);
        let sc = generate_scenario(&cfg).unwrap();
        let mut last = 0;
        for i in 0..cfg.num_instances {
            let n = sc.pool_size(i);
            prop_assert!(n >= last && n <= 150);
            last = n;
        }
        let state = RollingState::new(&sc);
        prop_assert!(validate_instance(&state.instance(0).unwrap()).is_empty());
    }
}
