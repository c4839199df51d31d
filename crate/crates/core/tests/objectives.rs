mod common;

use std::cmp::Ordering;

use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use svcp::heuristic::solve;
use svcp::objectives::{
    avg_priority_workload, delta_imbalance, lambda_imbalance, supply_weight, workload, SupplyWeights, WorkloadTable,
};
use svcp::rational::{widen, Rational, SmallRatio};
use svcp::scenario::synthetic::{random_instance, SyntheticConfig};
use svcp::{lex_compare, objective_vector, Assignment, Instance, ObjectiveVector};

fn r(n: i64, d: i64) -> Rational {
    widen(SmallRatio::new(n, d))
}

/// Two level-1 and one level-2 activity, all active on every slot.
fn levels_instance() -> Instance {
    let slots = 4;
    let vols = (0..14).map(|_| volunteer(&[0], 1, slots, 0)).collect();
    let acts = vec![
        activity(1, 0, 4, slots, 1, slots),
        activity(1, 0, 6, slots, 1, slots),
        activity(2, 0, 10, slots, 1, slots),
    ];
    instance(slots, 1, vols, acts, constants(slots, 1, 4))
}

fn staff(x: &mut Assignment, counts: &[(usize, usize)], t: usize) {
    let mut v = 0;
    for &(a, n) in counts {
        for _ in 0..n {
            x.set(v, a, t);
            v += 1;
        }
    }
}

#[test]
fn level_workload_pools_heads_and_demand() {
    let inst = levels_instance();
    let mut x = inst.empty_assignment();
    staff(&mut x, &[(0, 2), (1, 3), (2, 9)], 0);
    assert_eq!(avg_priority_workload(&inst, &x, 1, 0), SmallRatio::new(1, 2));
    assert_eq!(avg_priority_workload(&inst, &x, 3, 0), SmallRatio::zero());
    assert_eq!(avg_priority_workload(&inst, &x, 2, 0), workload(&inst, &x, 2, 0));
}

#[test]
fn lambda_follows_the_balancing_factor() {
    // Lbar_1 = 0.5, Lbar_2 = 0.9, sigma = 1/3
    let inst = levels_instance();
    let mut x = inst.empty_assignment();
    staff(&mut x, &[(0, 2), (1, 3), (2, 9)], 0);
    assert_eq!(lambda_imbalance(&inst, &x, 1, 2, 0).unwrap(), r(1, 5));
    assert_eq!(lambda_imbalance(&inst, &x, 2, 1, 0).unwrap(), Rational::zero());

    // exactly on the target ratio: Lbar_1 = 0.3 = 1/3 * 0.9
    let mut y = inst.empty_assignment();
    staff(&mut y, &[(0, 1), (1, 2), (2, 9)], 1);
    assert_eq!(lambda_imbalance(&inst, &y, 1, 2, 1).unwrap(), Rational::zero());
    assert_eq!(lambda_imbalance(&inst, &y, 2, 1, 1).unwrap(), Rational::zero());
}

#[test]
fn lambda_rejects_pairs_outside_one_class() {
    let inst = levels_instance();
    let x = inst.empty_assignment();
    assert!(lambda_imbalance(&inst, &x, 2, 3, 0).is_err());
    assert!(lambda_imbalance(&inst, &x, 1, 3, 0).is_err());
    assert!(lambda_imbalance(&inst, &x, 1, 1, 0).is_err());
}

#[test]
fn delta_is_the_positive_difference() {
    let slots = 1;
    let vols = (0..8).map(|_| volunteer(&[0], 1, slots, 0)).collect();
    let acts = vec![activity(1, 0, 10, slots, 1, 1), activity(1, 0, 10, slots, 1, 1)];
    let inst = instance(slots, 1, vols, acts, constants(slots, 1, 1));
    let mut x = inst.empty_assignment();
    staff(&mut x, &[(0, 8)], 0);
    assert_eq!(delta_imbalance(&inst, &x, 0, 1, 0), SmallRatio::new(4, 5));
    let mut y = inst.empty_assignment();
    staff(&mut y, &[(0, 5), (1, 3)], 0);
    assert_eq!(delta_imbalance(&inst, &y, 0, 1, 0), SmallRatio::new(1, 5));
    assert_eq!(delta_imbalance(&inst, &y, 1, 0, 0), SmallRatio::zero());
    assert_eq!(delta_imbalance(&inst, &y, 0, 0, 0), SmallRatio::zero());
}

#[test]
fn supply_weight_examples() {
    let slots = 2;
    let mut vols: Vec<_> = (0..40).map(|_| volunteer(&[0], 2, slots, 0)).collect();
    vols.extend((0..5).map(|_| volunteer(&[1], 2, slots, 0)));
    let acts = vec![
        activity(1, 0, 10, slots, 1, 1),
        activity(1, 1, 10, slots, 1, 2),
        activity(1, 0, 10, slots, 1, 2),
    ];
    let mut inst = instance(slots, 2, vols, acts, constants(slots, 1, 2));
    assert_eq!(supply_weight(&inst, 0, 0), SmallRatio::new(1, 4));
    assert_eq!(supply_weight(&inst, 1, 0), SmallRatio::from_integer(1));
    assert_eq!(supply_weight(&inst, 0, 1), SmallRatio::zero());
    for v in &mut inst.volunteers {
        v.availability[1] = false;
    }
    assert_eq!(SupplyWeights::new(&inst).supply(0, 1), 0);
    assert_eq!(supply_weight(&inst, 2, 1), SmallRatio::from_integer(1));
}

#[test]
fn empty_assignment_scores_zero() {
    let inst = levels_instance();
    assert_eq!(objective_vector(&inst, &inst.empty_assignment()), ObjectiveVector::zero(2));
}

#[test]
fn one_top_class_slot_scores_its_weight() {
    let slots = 4;
    let inst = instance(
        slots,
        1,
        vec![volunteer(&[0], 1, slots, 0)],
        vec![activity(3, 0, 1, slots, 1, slots)],
        constants(slots, 1, 4),
    );
    let mut x = inst.empty_assignment();
    x.set(0, 0, 0);
    let ov = objective_vector(&inst, &x);
    assert_eq!(ov.priority, vec![r(1, 1), Rational::zero()]);
    assert_eq!(ov.intra_class, Rational::zero());
    assert_eq!(ov.inter_activity, Rational::zero());
}

#[test]
fn only_multi_level_classes_count_towards_balance() {
    // level 3 is alone in its class; no level 1 or 2 activity is active, so
    // nothing is penalised
    let slots = 2;
    let vols = (0..3).map(|_| volunteer(&[0], 1, slots, 0)).collect();
    let acts = vec![activity(3, 0, 4, slots, 1, slots), activity(3, 0, 4, slots, 1, slots)];
    let inst = instance(slots, 1, vols, acts, constants(slots, 1, 2));
    let mut x = inst.empty_assignment();
    staff(&mut x, &[(0, 3)], 0);
    let ov = objective_vector(&inst, &x);
    assert_eq!(ov.intra_class, Rational::zero());
    // d = 4/3 capped at 1; Delta = 3/4 one way
    assert_eq!(ov.inter_activity, r(3, 4));
}

#[test]
fn lex_compare_examples() {
    let base = ObjectiveVector::from_values(vec![r(5, 1), r(3, 1), r(1, 1), r(1, 1)]).unwrap();
    assert_eq!(lex_compare(&base, &base).unwrap(), Ordering::Equal);
    let better_first = ObjectiveVector::from_values(vec![r(6, 1), r(0, 1), r(9, 1), r(9, 1)]).unwrap();
    assert_eq!(lex_compare(&better_first, &base).unwrap(), Ordering::Greater);
    let balanced = ObjectiveVector::from_values(vec![r(5, 1), r(3, 1), r(1, 2), r(9, 1)]).unwrap();
    assert_eq!(lex_compare(&balanced, &base).unwrap(), Ordering::Greater);
    assert_eq!(lex_compare(&base, &balanced).unwrap(), Ordering::Less);
    assert!(lex_compare(&base, &ObjectiveVector::zero(3)).is_err());
}

/// Direct evaluation of every objective over all ordered pairs.
fn naive_objectives(inst: &Instance, x: &Assignment) -> Vec<Rational> {
    let ps = &inst.priorities;
    let k = ps.num_classes();
    let slots = inst.num_slots();
    let mut out = vec![Rational::zero(); k + 2];
    for v in 0..inst.num_volunteers() {
        for (a, act) in inst.activities.iter().enumerate() {
            let class = ps.class_of(act.priority).unwrap();
            for t in 0..slots {
                if x.get(v, a, t) && act.is_active(t) {
                    out[k - 1 - class] += widen(inst.constants.weights[t]);
                }
            }
        }
    }
    for (ki, class) in ps.classes.iter().enumerate() {
        if !ps.alpha(ki) {
            continue;
        }
        for &p in class {
            for &q in class {
                if p.abs_diff(q) != 1 {
                    continue;
                }
                for t in 0..slots {
                    out[k] += lambda_imbalance(inst, x, p, q, t).unwrap();
                }
            }
        }
    }
    let d = |a: usize, t: usize| widen(supply_weight(inst, a, t));
    for t in 0..slots {
        for a in 0..inst.num_activities() {
            for b in 0..inst.num_activities() {
                let (pa, pb) = (&inst.activities[a], &inst.activities[b]);
                if a == b || pa.priority != pb.priority || !pa.is_active(t) || !pb.is_active(t) {
                    continue;
                }
                out[k + 1] += d(a, t) * d(b, t) * widen(delta_imbalance(inst, x, a, b, t));
            }
        }
    }
    out
}

fn random_solved(seed: u64) -> (Instance, Assignment) {
    let mut cfg = SyntheticConfig::broad();
    cfg.volunteers = 1..=30;
    cfg.activities = 1..=8;
    cfg.slots = 4..=16;
    let inst = random_instance(&cfg, &mut rng(seed));
    let x = solve(&inst).unwrap().assignment;
    (inst, x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn objective_vector_matches_direct_evaluation(seed in any::<u64>()) {
        let (inst, x) = random_solved(seed);
        prop_assert_eq!(objective_vector(&inst, &x).values(), naive_objectives(&inst, &x));
    }

    #[test]
    fn cached_workloads_match_recomputation(seed in any::<u64>(), flips in prop::collection::vec((0usize..30, 0usize..8, 0usize..16, any::<bool>()), 0..60)) {
        let (inst, mut x) = random_solved(seed);
        let (nv, na, nt) = x.dims();
        for (v, a, t, on) in flips {
            let (v, a, t) = (v % nv, a % na, t % nt);
            if on { x.set(v, a, t); } else { x.unset(v, a, t); }
        }
        prop_assert!(x.caches_consistent());
        prop_assert_eq!(WorkloadTable::from_assignment(&inst, &x), WorkloadTable::recompute(&inst, &x));
    }

    #[test]
    fn imbalances_are_never_negative(seed in any::<u64>()) {
        let (inst, x) = random_solved(seed);
        for t in 0..inst.num_slots() {
            for a in 0..inst.num_activities() {
                for b in 0..inst.num_activities() {
                    prop_assert!(!delta_imbalance(&inst, &x, a, b, t).is_negative());
                }
            }
            for p in 1..inst.priorities.levels {
                if inst.priorities.adjacent_in_class(p) {
                    prop_assert!(!lambda_imbalance(&inst, &x, p, p + 1, t).unwrap().is_negative());
                    prop_assert!(!lambda_imbalance(&inst, &x, p + 1, p, t).unwrap().is_negative());
                }
            }
        }
    }

    #[test]
    fn scaling_demand_and_heads_keeps_workloads(n in 0i64..50, d in 1i64..50, m in 1i64..20) {
        prop_assume!(n <= d);
        prop_assert_eq!(SmallRatio::new(n * m, d * m), SmallRatio::new(n, d));
        let slots = 1;
        let vols = (0..(d * m) as usize).map(|_| volunteer(&[0], 1, slots, 0)).collect();
        let base = instance(slots, 1, vec![], vec![activity(1, 0, d as u32, slots, 1, 1)], constants(slots, 1, 1));
        let scaled = instance(slots, 1, vols, vec![activity(1, 0, (d * m) as u32, slots, 1, 1)], constants(slots, 1, 1));
        let mut x = Assignment::new((d * m) as usize, 1, 1);
        for v in 0..(n * m) as usize { x.set(v, 0, 0); }
        let l_scaled = workload(&scaled, &x, 0, 0);
        prop_assert_eq!(l_scaled, SmallRatio::new(n, base.activities[0].demand as i64));
    }

    #[test]
    fn lex_compare_is_a_total_preorder(vals in prop::collection::vec(prop::collection::vec(0i64..4, 4), 3)) {
        let vs: Vec<ObjectiveVector> = vals
            .iter()
            .map(|v| ObjectiveVector::from_values(v.iter().map(|&n| r(n, 1)).collect()).unwrap())
            .collect();
        let cmp = |i: usize, j: usize| lex_compare(&vs[i], &vs[j]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(cmp(i, j), cmp(j, i).reverse());
                if cmp(i, j) == Ordering::Equal {
                    prop_assert_eq!(&vs[i], &vs[j]);
                }
                for k in 0..3 {
                    if cmp(i, j) != Ordering::Less && cmp(j, k) != Ordering::Less {
                        prop_assert_ne!(cmp(i, k), Ordering::Less);
                    }
                }
            }
        }
    }

    #[test]
    fn one_more_top_class_slot_is_better(seed in any::<u64>()) {
        let (inst, x) = random_solved(seed);
        let top = inst.priorities.num_classes() - 1;
        let mut extra = None;
        'search: for v in 0..inst.num_volunteers() {
            for (a, act) in inst.activities.iter().enumerate() {
                if inst.priorities.class_of(act.priority) != Some(top) {
                    continue;
                }
                for t in 0..inst.num_slots() {
                    if act.is_active(t) && x.activity_at(v, t).is_none() {
                        extra = Some((v, a, t));
                        break 'search;
                    }
                }
            }
        }
        let Some((v, a, t)) = extra else { return Ok(()) };
        let mut y = x.clone();
        y.set(v, a, t);
        let (ox, oy) = (objective_vector(&inst, &x), objective_vector(&inst, &y));
        prop_assert_eq!(lex_compare(&oy, &ox).unwrap(), Ordering::Greater);
    }
}
