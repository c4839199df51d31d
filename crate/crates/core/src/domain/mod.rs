//! Entities of the volunteer coordination problem, the instance model and
//! the feasibility checker.

mod assignment;
pub(crate) mod feasibility;
mod travel;
mod validate;

use std::collections::BTreeMap;

use num_traits::One;

pub use assignment::{Assignment, Run};
pub use feasibility::{check_feasibility, check_volunteer, Violation};
pub use travel::{travel_slots, TravelTable};
pub use validate::{validate_instance, Defect};

use crate::rational::SmallRatio;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Horizon {
    pub num_slots: usize,
    pub slot_minutes: u32,
}

impl Horizon {
    pub fn new(num_slots: usize) -> Self {
        Self {
            num_slots,
            slot_minutes: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capability {
    pub label: String,
}

/// Planar position in metres.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Location {
    pub x_m: i64,
    pub y_m: i64,
}

impl Location {
    pub fn new(x_m: i64, y_m: i64) -> Self {
        Self { x_m, y_m }
    }
}

/// The most recent run a volunteer worked before the current planning
/// window opened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PastRun {
    pub activity: usize,
    /// Slots of the run that lie before the window.
    pub length: u32,
    /// Empty slots between the end of the run and the window start; `0`
    /// means the run reached the last slot before the window, and it
    /// continues if the prior assignment keeps the volunteer on the same
    /// activity in slot 0.
    pub idle_slots: u32,
}

/// State a volunteer brings into a rolling-horizon instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CarryIn {
    /// Slots already worked before the window; counts against the
    /// working-time cap.
    pub worked_slots: u32,
    pub last_run: Option<PastRun>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Volunteer {
    /// `cap[c]`, one entry per capability.
    pub capabilities: Vec<bool>,
    /// `av[t]`, one entry per slot.
    pub availability: Vec<bool>,
    /// Slots needed to reach any activity from the volunteer's position.
    pub initial_travel: u32,
    /// Per-activity replacements for `initial_travel`.
    pub travel_overrides: BTreeMap<usize, u32>,
    pub carry_in: CarryIn,
}

impl Volunteer {
    pub fn new(capabilities: Vec<bool>, availability: Vec<bool>, initial_travel: u32) -> Self {
        Self {
            capabilities,
            availability,
            initial_travel,
            travel_overrides: BTreeMap::new(),
            carry_in: CarryIn::default(),
        }
    }

    pub fn initial_travel_to(&self, activity: usize) -> u32 {
        self.travel_overrides
            .get(&activity)
            .copied()
            .unwrap_or(self.initial_travel)
    }

    pub fn has_capability(&self, c: usize) -> bool {
        self.capabilities.get(c).copied().unwrap_or(false)
    }

    pub fn is_available(&self, t: usize) -> bool {
        self.availability.get(t).copied().unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskActivity {
    pub task_id: u32,
    pub label: String,
    /// Index of the single required capability.
    pub capability: usize,
    /// Priority level `1..=P`.
    pub priority: u32,
    /// Volunteers demanded per slot, `n_a >= 1`.
    pub demand: u32,
    /// `r[t]`: whether the activity is active in slot `t`.
    pub window: Vec<bool>,
    pub location: Location,
}

impl TaskActivity {
    pub fn is_active(&self, t: usize) -> bool {
        self.window.get(t).copied().unwrap_or(false)
    }
}

/// Priority levels `1..=levels` grouped into ordered classes. `classes[0]`
/// is the lowest class; a higher class index means more urgent work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityStructure {
    pub levels: u32,
    pub classes: Vec<Vec<u32>>,
    /// `sigma[p]` is the balancing factor between levels `p` and `p + 1`
    /// of the same class.
    pub sigma: BTreeMap<u32, SmallRatio>,
}

impl PriorityStructure {
    /// Three levels, classes `{1,2}` and `{3}`, `sigma(1,2) = 1/3`.
    pub fn halle() -> Self {
        Self {
            levels: 3,
            classes: vec![vec![1, 2], vec![3]],
            sigma: BTreeMap::from([(1, SmallRatio::new(1, 3))]),
        }
    }

    /// A single class holding every level, with unit balancing factors.
    pub fn single_class(levels: u32) -> Self {
        Self {
            levels,
            classes: vec![(1..=levels).collect()],
            sigma: (1..levels).map(|p| (p, SmallRatio::one())).collect(),
        }
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Index of the class containing level `p`.
    pub fn class_of(&self, p: u32) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&p))
    }

    /// `alpha_k`: whether class `k` holds more than one level.
    pub fn alpha(&self, k: usize) -> bool {
        self.classes.get(k).is_some_and(|c| c.len() > 1)
    }

    /// Whether `p` and `p + 1` both belong to one class.
    pub fn adjacent_in_class(&self, p: u32) -> bool {
        matches!((self.class_of(p), self.class_of(p + 1)), (Some(a), Some(b)) if a == b)
    }

    /// Weight applied to an activity's workload when picking among
    /// activities of one slot: `sigma(p, p+1)`, or 1 when `p` is the top
    /// level of its class.
    pub fn selection_weight(&self, p: u32) -> SmallRatio {
        if self.adjacent_in_class(p) {
            self.sigma.get(&p).copied().unwrap_or_else(SmallRatio::one)
        } else {
            SmallRatio::one()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constants {
    /// Minimum number of contiguous slots of one assignment.
    pub tau_min: u32,
    /// Maximum total worked slots per volunteer.
    pub tau_max: u32,
    pub travel_speed_kmh: SmallRatio,
    /// `w[t]`, strictly decreasing and positive.
    pub weights: Vec<SmallRatio>,
}

impl Constants {
    /// Minimum run 4, cap 16, 10 km/h, default weights.
    pub fn halle(num_slots: usize) -> Self {
        Self {
            tau_min: 4,
            tau_max: 16,
            travel_speed_kmh: SmallRatio::from_integer(10),
            weights: default_weights(num_slots),
        }
    }
}

/// `w_t = 1 - (t-1)/T` for 1-based `t`, i.e. `(T - t)/T` for 0-based `t`.
pub fn default_weights(num_slots: usize) -> Vec<SmallRatio> {
    let n = num_slots as i64;
    (0..n).map(|t| SmallRatio::new(n - t, n)).collect()
}

/// A frozen decision problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub horizon: Horizon,
    pub capabilities: Vec<Capability>,
    pub volunteers: Vec<Volunteer>,
    pub activities: Vec<TaskActivity>,
    pub priorities: PriorityStructure,
    pub constants: Constants,
    /// Assignments fixed by the previous instance (`o`).
    pub prior: Assignment,
}

impl Instance {
    /// An instance without prior assignments.
    pub fn new(
        horizon: Horizon,
        capabilities: Vec<Capability>,
        volunteers: Vec<Volunteer>,
        activities: Vec<TaskActivity>,
        priorities: PriorityStructure,
        constants: Constants,
    ) -> Self {
        let prior = Assignment::new(volunteers.len(), activities.len(), horizon.num_slots);
        Self {
            horizon,
            capabilities,
            volunteers,
            activities,
            priorities,
            constants,
            prior,
        }
    }

    pub fn num_slots(&self) -> usize {
        self.horizon.num_slots
    }

    pub fn num_volunteers(&self) -> usize {
        self.volunteers.len()
    }

    pub fn num_activities(&self) -> usize {
        self.activities.len()
    }

    /// An all-zero assignment shaped for this instance.
    pub fn empty_assignment(&self) -> Assignment {
        Assignment::new(self.num_volunteers(), self.num_activities(), self.num_slots())
    }

    /// Working-time budget left for `v` given `x`, saturating at zero.
    pub fn remaining_budget(&self, x: &Assignment, v: usize) -> u32 {
        let used = self.volunteers[v].carry_in.worked_slots + x.total_working_time(v);
        self.constants.tau_max.saturating_sub(used)
    }

    pub fn travel_table(&self) -> TravelTable {
        TravelTable::new(self)
    }
}
