#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use svcp::domain::default_weights;
use svcp::rational::SmallRatio;
use svcp::{Capability, Constants, Horizon, Instance, Location, PriorityStructure, TaskActivity, Volunteer};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn capabilities(n: usize) -> Vec<Capability> {
    (0..n)
        .map(|c| Capability {
            label: format!("c{}", c + 1),
        })
        .collect()
}

/// Activity at the origin, active on 1-based slots `from..=to`.
pub fn activity(priority: u32, capability: usize, demand: u32, slots: usize, from: usize, to: usize) -> TaskActivity {
    TaskActivity {
        task_id: 1,
        label: format!("p{priority}"),
        capability,
        priority,
        demand,
        window: (1..=slots).map(|t| (from..=to).contains(&t)).collect(),
        location: Location::new(0, 0),
    }
}

/// Volunteer holding the listed capabilities, available on every slot.
pub fn volunteer(caps: &[usize], num_caps: usize, slots: usize, travel: u32) -> Volunteer {
    let mut mask = vec![false; num_caps];
    for &c in caps {
        mask[c] = true;
    }
    Volunteer::new(mask, vec![true; slots], travel)
}

pub fn constants(slots: usize, tau_min: u32, tau_max: u32) -> Constants {
    Constants {
        tau_min,
        tau_max,
        travel_speed_kmh: SmallRatio::from_integer(10),
        weights: default_weights(slots),
    }
}

pub fn instance(
    slots: usize,
    num_caps: usize,
    volunteers: Vec<Volunteer>,
    activities: Vec<TaskActivity>,
    constants: Constants,
) -> Instance {
    Instance::new(
        Horizon::new(slots),
        capabilities(num_caps),
        volunteers,
        activities,
        PriorityStructure::halle(),
        constants,
    )
}
