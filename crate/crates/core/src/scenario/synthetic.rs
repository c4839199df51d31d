//! Random instances of configurable size, for property tests and
//! benchmarks.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::Rng;

use crate::domain::{
    default_weights, Capability, CarryIn, Constants, Horizon, Instance, Location, PastRun, PriorityStructure,
    TaskActivity, Volunteer,
};
use crate::heuristic::{self, SolveOptions};
use crate::rational::SmallRatio;

#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    pub volunteers: RangeInclusive<usize>,
    pub activities: RangeInclusive<usize>,
    pub slots: RangeInclusive<usize>,
    pub max_capabilities: usize,
    pub max_demand: u32,
    /// Side of the square the activities are placed in, metres.
    pub area_m: i64,
    /// Probability that a volunteer brings working history into the
    /// window.
    pub history_probability: f64,
    /// Probability of deriving a prior assignment.
    pub prior_probability: f64,
}

impl SyntheticConfig {
    /// Up to 200 volunteers, 20 activities and 48 slots.
    pub fn broad() -> Self {
        Self {
            volunteers: 1..=200,
            activities: 1..=20,
            slots: 6..=48,
            max_capabilities: 4,
            max_demand: 12,
            area_m: 12_000,
            history_probability: 0.2,
            prior_probability: 0.5,
        }
    }

    /// Instances the exact oracle accepts with its default limits.
    pub fn micro() -> Self {
        Self {
            volunteers: 1..=4,
            activities: 1..=3,
            slots: 4..=8,
            max_capabilities: 2,
            max_demand: 2,
            area_m: 8_000,
            history_probability: 0.2,
            prior_probability: 0.3,
        }
    }

    /// Instances small enough for brute force over every tensor.
    pub fn nano() -> Self {
        Self {
            volunteers: 1..=2,
            activities: 1..=2,
            slots: 3..=6,
            max_capabilities: 2,
            max_demand: 2,
            area_m: 8_000,
            history_probability: 0.2,
            prior_probability: 0.3,
        }
    }
}

fn random_priorities(rng: &mut impl Rng) -> PriorityStructure {
    match rng.random_range(0..4) {
        0 | 1 => PriorityStructure::halle(),
        2 => PriorityStructure {
            levels: 2,
            classes: vec![vec![1, 2]],
            sigma: BTreeMap::from([(1, SmallRatio::new(rng.random_range(1..=3), rng.random_range(1..=3)))]),
        },
        _ => PriorityStructure {
            levels: 3,
            classes: vec![vec![1], vec![2], vec![3]],
            sigma: BTreeMap::new(),
        },
    }
}

fn random_interval(rng: &mut impl Rng, slots: usize, min_len: usize) -> (usize, usize) {
    let len = rng.random_range(min_len.min(slots)..=slots);
    let start = rng.random_range(0..=slots - len);
    (start, start + len - 1)
}

pub fn random_instance(config: &SyntheticConfig, rng: &mut impl Rng) -> Instance {
    let slots = rng.random_range(config.slots.clone());
    let nv = rng.random_range(config.volunteers.clone());
    let na = rng.random_range(config.activities.clone());
    let nc = rng.random_range(1..=config.max_capabilities.max(1));
    let priorities = random_priorities(rng);

    let tau_min = rng.random_range(1..=slots.min(4)) as u32;
    let tau_max = rng.random_range(tau_min..=(slots as u32).min(16));
    let constants = Constants {
        tau_min,
        tau_max,
        travel_speed_kmh: SmallRatio::from_integer(10),
        weights: default_weights(slots),
    };

    let activities: Vec<TaskActivity> = (0..na)
        .map(|a| {
            let window = if rng.random_bool(0.7) {
                vec![true; slots]
            } else {
                let (s, e) = random_interval(rng, slots, 1);
                (0..slots).map(|t| (s..=e).contains(&t)).collect()
            };
            TaskActivity {
                task_id: a as u32 + 1,
                label: format!("activity {}", a + 1),
                capability: rng.random_range(0..nc),
                priority: rng.random_range(1..=priorities.levels),
                demand: rng.random_range(1..=config.max_demand.max(1)),
                window,
                location: Location::new(rng.random_range(0..=config.area_m), rng.random_range(0..=config.area_m)),
            }
        })
        .collect();

    let volunteers: Vec<Volunteer> = (0..nv)
        .map(|_| {
            let caps = (0..nc).map(|_| rng.random_bool(0.6)).collect();
            let (s, e) = random_interval(rng, slots, 1);
            let avail = (0..slots).map(|t| (s..=e).contains(&t)).collect();
            let mut vol = Volunteer::new(caps, avail, rng.random_range(0..=2));
            if na > 0 && rng.random_bool(0.2) {
                vol.travel_overrides.insert(rng.random_range(0..na), rng.random_range(0..=3));
            }
            if na > 0 && rng.random_bool(config.history_probability) {
                let length = rng.random_range(1..=tau_max.min(4));
                vol.carry_in = CarryIn {
                    worked_slots: length + rng.random_range(0..=(tau_max - length) / 2),
                    last_run: Some(PastRun {
                        activity: rng.random_range(0..na),
                        length,
                        idle_slots: rng.random_range(0..=2),
                    }),
                };
            }
            vol
        })
        .collect();

    let mut instance = Instance::new(
        Horizon::new(slots),
        (0..nc)
            .map(|c| Capability {
                label: format!("capability {}", c + 1),
            })
            .collect(),
        volunteers,
        activities,
        priorities,
        constants,
    );

    if rng.random_bool(config.prior_probability) {
        instance.prior = derived_prior(&instance, rng);
    }
    instance
}

/// A feasible prior assignment: the heuristic's answer to a copy of the
/// instance with halved demands, with some volunteers' rows dropped.
fn derived_prior(instance: &Instance, rng: &mut impl Rng) -> crate::domain::Assignment {
    let mut reduced = instance.clone();
    for act in &mut reduced.activities {
        act.demand = act.demand.div_ceil(2);
    }
    let options = SolveOptions {
        record_trace: false,
        reuse_candidates: true,
    };
    let mut prior = instance.empty_assignment();
    let Ok(sol) = heuristic::solve_with(&reduced, options) else {
        return prior;
    };
    for v in 0..instance.num_volunteers() {
        if !rng.random_bool(0.5) {
            continue;
        }
        for run in sol.assignment.volunteer_runs(v) {
            prior.assign_run(v, run.activity, run.start, run.end);
        }
    }
    prior
}
