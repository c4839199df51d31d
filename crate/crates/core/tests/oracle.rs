mod common;

use common::*;
use proptest::prelude::*;
use svcp::domain::check_feasibility;
use svcp::heuristic::solve;
use svcp::oracle::{default_epsilon, relative_gap, solve_exact, solve_raw_enumeration, OracleLimits};
use svcp::rational::{widen, Rational, SmallRatio};
use svcp::scenario::synthetic::{random_instance, SyntheticConfig};
use svcp::{objective_vector, CarryIn, Error, ObjectiveVector, PastRun};

fn r(n: i64, d: i64) -> Rational {
    widen(SmallRatio::new(n, d))
}

fn vector(vals: &[(i64, i64)]) -> ObjectiveVector {
    ObjectiveVector::from_values(vals.iter().map(|&(n, d)| r(n, d)).collect()).unwrap()
}

#[test]
fn zero_activities_give_the_empty_optimum() {
    let inst = instance(6, 1, vec![volunteer(&[0], 1, 6, 0)], vec![], constants(6, 2, 6));
    let sol = solve_exact(&inst, &OracleLimits::default()).unwrap();
    assert!(sol.assignment.is_empty());
    assert_eq!(sol.objectives, ObjectiveVector::zero(2));
}

#[test]
fn top_class_wins_over_an_earlier_lower_class() {
    // one volunteer with 4 slots of budget: working the level-1 activity
    // from slot 1 would leave nothing for the level-3 activity in 5..8
    let slots = 8;
    let inst = instance(
        slots,
        1,
        vec![volunteer(&[0], 1, slots, 0)],
        vec![activity(1, 0, 1, slots, 1, slots), activity(3, 0, 1, slots, 5, 8)],
        constants(slots, 4, 4),
    );
    let sol = solve_exact(&inst, &OracleLimits::default()).unwrap();
    let runs = sol.assignment.runs();
    assert_eq!(runs.len(), 1);
    assert_eq!((runs[0].activity, runs[0].start, runs[0].end), (1, 4, 7));
    assert_eq!(sol.objectives.priority[1], Rational::from_integer(0.into()));
}

#[test]
fn continuation_of_a_past_run_may_be_short() {
    // the volunteer worked activity 1 for 3 slots right before the window;
    // two more slots complete a 5-slot run
    let slots = 6;
    let mut vol = volunteer(&[0], 1, slots, 3);
    vol.carry_in = CarryIn {
        worked_slots: 3,
        last_run: Some(PastRun { activity: 0, length: 3, idle_slots: 0 }),
    };
    vol.availability = vec![true, true, false, false, false, false];
    let inst = instance(slots, 1, vec![vol], vec![activity(3, 0, 1, slots, 1, slots)], constants(slots, 4, 6));
    let exact = solve_exact(&inst, &OracleLimits::default()).unwrap();
    assert_eq!(exact.assignment.runs().len(), 1);
    assert_eq!(exact.assignment.runs()[0].len(), 2);
    let raw = solve_raw_enumeration(&inst).unwrap();
    assert_eq!(raw.objectives, exact.objectives);
}

#[test]
fn oversized_instances_are_refused() {
    let slots = 9;
    let inst = instance(slots, 1, vec![volunteer(&[0], 1, slots, 0)], vec![], constants(slots, 2, 6));
    assert!(matches!(solve_exact(&inst, &OracleLimits::default()), Err(Error::Refused(_))));
    let slots = 7;
    let inst = instance(slots, 1, vec![volunteer(&[0], 1, slots, 0)], vec![], constants(slots, 2, 6));
    assert!(matches!(solve_raw_enumeration(&inst), Err(Error::Refused(_))));
}

#[test]
fn state_budget_is_enforced() {
    let slots = 8;
    let vols = (0..4).map(|_| volunteer(&[0], 1, slots, 0)).collect();
    let acts = (0..3).map(|_| activity(3, 0, 4, slots, 1, slots)).collect();
    let inst = instance(slots, 1, vols, acts, constants(slots, 1, 8));
    let limits = OracleLimits { max_states: 1000, ..OracleLimits::default() };
    assert!(matches!(solve_exact(&inst, &limits), Err(Error::ResourceExhausted(_))));
}

#[test]
fn gap_examples() {
    let eps = default_epsilon();
    let same = vector(&[(3, 1), (2, 1), (1, 5), (0, 1)]);
    let rep = relative_gap(&same, &same, &eps).unwrap();
    assert!(rep.is_zero());

    let opt = vector(&[(100, 1), (0, 1), (1, 1), (0, 1)]);
    let heur = vector(&[(99, 1), (0, 1), (1, 1), (1, 5)]);
    let rep = relative_gap(&heur, &opt, &eps).unwrap();
    assert_eq!(rep.gaps[0], r(1, 100));
    assert!(!rep.near_zero[0]);
    assert!(rep.near_zero[1]);
    assert_eq!(rep.gaps[2], Rational::from_integer(0.into()));
    assert!(rep.near_zero[3]);
    assert_eq!(rep.gaps[3], r(1, 5) / &eps);

    assert!(relative_gap(&heur, &ObjectiveVector::zero(3), &eps).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn both_enumerators_agree(seed in any::<u64>()) {
        let inst = random_instance(&SyntheticConfig::nano(), &mut rng(seed));
        let runs = solve_exact(&inst, &OracleLimits::default()).unwrap();
        let raw = solve_raw_enumeration(&inst).unwrap();
        prop_assert_eq!(&runs.objectives, &raw.objectives);
        prop_assert!(check_feasibility(&inst, &runs.assignment).unwrap().is_empty());
        prop_assert_eq!(objective_vector(&inst, &runs.assignment), runs.objectives);
    }

    #[test]
    fn oracle_output_is_feasible_and_keeps_the_prior(seed in any::<u64>()) {
        let inst = random_instance(&SyntheticConfig::micro(), &mut rng(seed));
        match solve_exact(&inst, &OracleLimits::default()) {
            Ok(sol) => {
                prop_assert!(check_feasibility(&inst, &sol.assignment).unwrap().is_empty());
                prop_assert!(sol.assignment.contains(&inst.prior));
            }
            Err(Error::ResourceExhausted(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn self_gap_is_zero(seed in any::<u64>()) {
        let inst = random_instance(&SyntheticConfig::micro(), &mut rng(seed));
        let ov = objective_vector(&inst, &solve(&inst).unwrap().assignment);
        prop_assert!(relative_gap(&ov, &ov, &default_epsilon()).unwrap().is_zero());
    }
}
