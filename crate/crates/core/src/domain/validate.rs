use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use thiserror::Error;

use super::{check_feasibility, Instance, Violation};

/// A structural defect of an instance. Messages use 1-based ids.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Defect {
    #[error("horizon must have at least one slot")]
    EmptyHorizon,
    #[error("slot length must be at least one minute")]
    ZeroSlotLength,
    #[error("no priority levels")]
    NoPriorityLevels,
    #[error("priority class {class} is empty")]
    EmptyClass { class: usize },
    #[error("classes not disjoint: level {level} appears in more than one class")]
    ClassesNotDisjoint { level: u32 },
    #[error("priority level {level} belongs to no class")]
    LevelNotCovered { level: u32 },
    #[error("class {class} contains level {level} outside 1..={levels}")]
    LevelOutOfRange { class: usize, level: u32, levels: u32 },
    #[error("classes out of order: class {lower} has a level above a level of class {higher}")]
    ClassesOutOfOrder { lower: usize, higher: usize },
    #[error("missing balancing factor for levels {level} and {}", .level + 1)]
    MissingSigma { level: u32 },
    #[error("balancing factor for levels {level} and {} must be positive", .level + 1)]
    NonPositiveSigma { level: u32 },
    #[error("balancing factor given for levels {level} and {} which are not adjacent within one class", .level + 1)]
    UnexpectedSigma { level: u32 },
    #[error("tau_min must be at least 1")]
    ZeroMinDuration,
    #[error("tau_min ({tau_min}) exceeds tau_max ({tau_max})")]
    MinExceedsMax { tau_min: u32, tau_max: u32 },
    #[error("tau_max ({tau_max}) exceeds the horizon ({slots} slots)")]
    MaxExceedsHorizon { tau_max: u32, slots: usize },
    #[error("travel speed must be positive")]
    NonPositiveSpeed,
    #[error("{found} slot weights for a {expected}-slot horizon")]
    WeightCount { expected: usize, found: usize },
    #[error("slot weights must be positive and strictly decreasing (slot {slot})")]
    WeightsNotDecreasing { slot: usize },
    #[error("volunteer {volunteer}: {found} capability flags, expected {expected}")]
    VolunteerCapabilities { volunteer: usize, expected: usize, found: usize },
    #[error("volunteer {volunteer}: availability covers {found} slots, expected {expected}")]
    VolunteerAvailability { volunteer: usize, expected: usize, found: usize },
    #[error("volunteer {volunteer}: travel override for unknown activity {activity}")]
    UnknownTravelActivity { volunteer: usize, activity: usize },
    #[error("volunteer {volunteer}: carried-in history refers to unknown activity {activity}")]
    UnknownHistoryActivity { volunteer: usize, activity: usize },
    #[error("volunteer {volunteer}: carried-in work ({worked}) is shorter than its last run ({run})")]
    InconsistentHistory { volunteer: usize, worked: u32, run: u32 },
    #[error("activity {activity}: capability {capability} does not exist")]
    UnknownCapability { activity: usize, capability: usize },
    #[error("activity {activity}: priority {priority} outside 1..={levels}")]
    PriorityOutOfRange { activity: usize, priority: u32, levels: u32 },
    #[error("activity {activity}: demand must be at least 1")]
    ZeroDemand { activity: usize },
    #[error("activity {activity}: window covers {found} slots, expected {expected}")]
    ActivityWindow { activity: usize, expected: usize, found: usize },
    #[error("prior assignment dimensions {found:?} do not match {expected:?}")]
    PriorDimensions { expected: (usize, usize, usize), found: (usize, usize, usize) },
    #[error("prior assignment infeasible: {0}")]
    InfeasiblePrior(Violation),
}

impl Defect {
    /// Dotted location of the defect within an instance document.
    pub fn path(&self) -> String {
        match self {
            Defect::EmptyHorizon | Defect::ZeroSlotLength => "horizon".into(),
            Defect::NoPriorityLevels
            | Defect::EmptyClass { .. }
            | Defect::ClassesNotDisjoint { .. }
            | Defect::LevelNotCovered { .. }
            | Defect::LevelOutOfRange { .. }
            | Defect::ClassesOutOfOrder { .. } => "priority.classes".into(),
            Defect::MissingSigma { .. } | Defect::NonPositiveSigma { .. } | Defect::UnexpectedSigma { .. } => {
                "priority.sigma".into()
            }
            Defect::ZeroMinDuration | Defect::MinExceedsMax { .. } | Defect::MaxExceedsHorizon { .. } => {
                "constants".into()
            }
            Defect::NonPositiveSpeed => "constants.travel_speed_kmh".into(),
            Defect::WeightCount { .. } | Defect::WeightsNotDecreasing { .. } => "constants.weights".into(),
            Defect::VolunteerCapabilities { volunteer, .. }
            | Defect::VolunteerAvailability { volunteer, .. }
            | Defect::UnknownTravelActivity { volunteer, .. }
            | Defect::UnknownHistoryActivity { volunteer, .. }
            | Defect::InconsistentHistory { volunteer, .. } => format!("volunteers[{}]", volunteer - 1),
            Defect::UnknownCapability { activity, .. }
            | Defect::PriorityOutOfRange { activity, .. }
            | Defect::ZeroDemand { activity }
            | Defect::ActivityWindow { activity, .. } => format!("activities[{}]", activity - 1),
            Defect::PriorDimensions { .. } | Defect::InfeasiblePrior(_) => "prior_assignments".into(),
        }
    }
}

/// Every violated structural invariant of `instance`; empty when valid.
pub fn validate_instance(instance: &Instance) -> Vec<Defect> {
    let mut out = Vec::new();
    let slots = instance.horizon.num_slots;
    if slots == 0 {
        out.push(Defect::EmptyHorizon);
    }
    if instance.horizon.slot_minutes == 0 {
        out.push(Defect::ZeroSlotLength);
    }

    priority_defects(instance, &mut out);

    let c = &instance.constants;
    if c.tau_min == 0 {
        out.push(Defect::ZeroMinDuration);
    }
    if c.tau_min > c.tau_max {
        out.push(Defect::MinExceedsMax { tau_min: c.tau_min, tau_max: c.tau_max });
    }
    if c.tau_max as usize > slots {
        out.push(Defect::MaxExceedsHorizon { tau_max: c.tau_max, slots });
    }
    if !c.travel_speed_kmh.is_positive() {
        out.push(Defect::NonPositiveSpeed);
    }
    if c.weights.len() != slots {
        out.push(Defect::WeightCount { expected: slots, found: c.weights.len() });
    } else {
        for t in 0..slots {
            let ok = c.weights[t].is_positive() && (t + 1 == slots || c.weights[t] > c.weights[t + 1]);
            if !ok {
                out.push(Defect::WeightsNotDecreasing { slot: t + 1 });
                break;
            }
        }
    }

    let num_caps = instance.capabilities.len();
    let num_acts = instance.activities.len();
    for (i, v) in instance.volunteers.iter().enumerate() {
        let id = i + 1;
        if v.capabilities.len() != num_caps {
            out.push(Defect::VolunteerCapabilities { volunteer: id, expected: num_caps, found: v.capabilities.len() });
        }
        if v.availability.len() != slots {
            out.push(Defect::VolunteerAvailability { volunteer: id, expected: slots, found: v.availability.len() });
        }
        if let Some(&a) = v.travel_overrides.keys().find(|&&a| a >= num_acts) {
            out.push(Defect::UnknownTravelActivity { volunteer: id, activity: a + 1 });
        }
        if let Some(p) = v.carry_in.last_run {
            if p.activity >= num_acts {
                out.push(Defect::UnknownHistoryActivity { volunteer: id, activity: p.activity + 1 });
            }
            if v.carry_in.worked_slots < p.length {
                out.push(Defect::InconsistentHistory { volunteer: id, worked: v.carry_in.worked_slots, run: p.length });
            }
        }
    }
    for (i, a) in instance.activities.iter().enumerate() {
        let id = i + 1;
        if a.capability >= num_caps {
            out.push(Defect::UnknownCapability { activity: id, capability: a.capability + 1 });
        }
        if a.priority == 0 || a.priority > instance.priorities.levels {
            out.push(Defect::PriorityOutOfRange { activity: id, priority: a.priority, levels: instance.priorities.levels });
        }
        if a.demand == 0 {
            out.push(Defect::ZeroDemand { activity: id });
        }
        if a.window.len() != slots {
            out.push(Defect::ActivityWindow { activity: id, expected: slots, found: a.window.len() });
        }
    }

    let expected = (instance.num_volunteers(), num_acts, slots);
    if instance.prior.dims() != expected {
        out.push(Defect::PriorDimensions { expected, found: instance.prior.dims() });
    }

    // feasibility of the prior is only meaningful on a sound structure
    if out.is_empty() {
        if let Ok(violations) = check_feasibility(instance, &instance.prior) {
            out.extend(violations.into_iter().map(Defect::InfeasiblePrior));
        }
    }
    out
}

fn priority_defects(instance: &Instance, out: &mut Vec<Defect>) {
    let ps = &instance.priorities;
    if ps.levels == 0 {
        out.push(Defect::NoPriorityLevels);
    }
    let mut seen = BTreeSet::new();
    for (k, class) in ps.classes.iter().enumerate() {
        if class.is_empty() {
            out.push(Defect::EmptyClass { class: k + 1 });
        }
        for &p in class {
            if p == 0 || p > ps.levels {
                out.push(Defect::LevelOutOfRange { class: k + 1, level: p, levels: ps.levels });
            }
            if !seen.insert(p) {
                out.push(Defect::ClassesNotDisjoint { level: p });
            }
        }
    }
    for p in 1..=ps.levels {
        if !seen.contains(&p) {
            out.push(Defect::LevelNotCovered { level: p });
        }
    }
    for k in 0..ps.classes.len() {
        for k2 in (k + 1)..ps.classes.len() {
            let max_low = ps.classes[k].iter().max();
            let min_high = ps.classes[k2].iter().min();
            if let (Some(lo), Some(hi)) = (max_low, min_high) {
                if lo >= hi {
                    out.push(Defect::ClassesOutOfOrder { lower: k + 1, higher: k2 + 1 });
                }
            }
        }
    }
    for class in &ps.classes {
        for &p in class {
            if class.contains(&(p + 1)) {
                match ps.sigma.get(&p) {
                    None => out.push(Defect::MissingSigma { level: p }),
                    Some(s) if !s.is_positive() || s.is_zero() => out.push(Defect::NonPositiveSigma { level: p }),
                    Some(_) => {}
                }
            }
        }
    }
    for &p in ps.sigma.keys() {
        let adjacent = ps.classes.iter().any(|c| c.contains(&p) && c.contains(&(p + 1)));
        if !adjacent {
            out.push(Defect::UnexpectedSigma { level: p });
        }
    }
}
