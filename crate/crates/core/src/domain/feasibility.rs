use std::fmt;

use super::{Assignment, Instance, Run, TravelTable};
use crate::error::{Error, Result};

/// One broken rule of the feasible assignment space. Slots are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// C1: volunteer lacks the activity's capability.
    Capability { volunteer: usize, activity: usize, slot: usize },
    /// C2: volunteer not available.
    Availability { volunteer: usize, activity: usize, slot: usize },
    /// C3: activity not active.
    OutsideWindow { volunteer: usize, activity: usize, slot: usize },
    /// C4: more volunteers than demanded.
    Overstaffed { activity: usize, slot: usize, assigned: u32, demand: u32 },
    /// C5: several activities in one slot.
    DoubleBooked { volunteer: usize, slot: usize, activities: u32 },
    /// C6: working-time cap exceeded (carried-in slots included).
    WorkingTime { volunteer: usize, worked: u32, limit: u32 },
    /// C7: run shorter than the minimum duration.
    ShortRun { run: Run, effective_len: u32, min: u32 },
    /// C8: first run starts before the volunteer can arrive.
    InitialTravel { run: Run, earliest: usize },
    /// C9: not enough idle slots to travel between consecutive runs.
    /// `from` is `None` when the earlier run precedes the window.
    Travel { volunteer: usize, from: Option<Run>, to: Run, gap: i64, required: u32 },
    /// C10: a fixed prior assignment was dropped.
    Preempted { volunteer: usize, activity: usize, slot: usize },
}

impl Violation {
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::Capability { .. } => "C1",
            Violation::Availability { .. } => "C2",
            Violation::OutsideWindow { .. } => "C3",
            Violation::Overstaffed { .. } => "C4",
            Violation::DoubleBooked { .. } => "C5",
            Violation::WorkingTime { .. } => "C6",
            Violation::ShortRun { .. } => "C7",
            Violation::InitialTravel { .. } => "C8",
            Violation::Travel { .. } => "C9",
            Violation::Preempted { .. } => "C10",
        }
    }
}

impl fmt::Display for Violation {
    // 1-based ids and slots, as in documents
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rule = self.rule();
        match *self {
            Violation::Capability { volunteer, activity, slot } => write!(
                f,
                "{rule}: volunteer {} lacks the capability of activity {} (slot {})",
                volunteer + 1, activity + 1, slot + 1
            ),
            Violation::Availability { volunteer, activity, slot } => write!(
                f,
                "{rule}: volunteer {} is unavailable in slot {} (activity {})",
                volunteer + 1, slot + 1, activity + 1
            ),
            Violation::OutsideWindow { volunteer, activity, slot } => write!(
                f,
                "{rule}: activity {} is not active in slot {} (volunteer {})",
                activity + 1, slot + 1, volunteer + 1
            ),
            Violation::Overstaffed { activity, slot, assigned, demand } => write!(
                f,
                "{rule}: activity {} has {assigned} volunteers in slot {} but demands {demand}",
                activity + 1, slot + 1
            ),
            Violation::DoubleBooked { volunteer, slot, activities } => write!(
                f,
                "{rule}: volunteer {} works {activities} activities in slot {}",
                volunteer + 1, slot + 1
            ),
            Violation::WorkingTime { volunteer, worked, limit } => write!(
                f,
                "{rule}: volunteer {} works {worked} slots, limit {limit}",
                volunteer + 1
            ),
            Violation::ShortRun { run, effective_len, min } => write!(
                f,
                "{rule}: volunteer {} works activity {} for {effective_len} slot(s) from slot {}, minimum {min}",
                run.volunteer + 1, run.activity + 1, run.start + 1
            ),
            Violation::InitialTravel { run, earliest } => write!(
                f,
                "{rule}: volunteer {} starts activity {} in slot {}, earliest arrival is slot {}",
                run.volunteer + 1, run.activity + 1, run.start + 1, earliest + 1
            ),
            Violation::Travel { volunteer, from, to, gap, required } => {
                let from = match from {
                    Some(r) => format!("activity {} ending in slot {}", r.activity + 1, r.end + 1),
                    None => "the run before the window".to_string(),
                };
                write!(
                    f,
                    "{rule}: volunteer {} has {gap} idle slot(s) between {from} and activity {} in slot {}, needs {required}",
                    volunteer + 1, to.activity + 1, to.start + 1
                )
            }
            Violation::Preempted { volunteer, activity, slot } => write!(
                f,
                "{rule}: fixed assignment of volunteer {} to activity {} in slot {} was dropped",
                volunteer + 1, activity + 1, slot + 1
            ),
        }
    }
}

fn check_dims(instance: &Instance, x: &Assignment) -> Result<()> {
    let want = (instance.num_volunteers(), instance.num_activities(), instance.num_slots());
    if x.dims() != want {
        return Err(Error::input(format!(
            "assignment dimensions {:?} do not match instance {:?}",
            x.dims(),
            want
        )));
    }
    Ok(())
}

/// Every violation of rules C1–C10 by `x`. An empty list means feasible.
pub fn check_feasibility(instance: &Instance, x: &Assignment) -> Result<Vec<Violation>> {
    check_dims(instance, x)?;
    check_dims(instance, &instance.prior)?;
    let travel = TravelTable::new(instance);
    let mut out = Vec::new();
    for v in 0..instance.num_volunteers() {
        volunteer_rules(instance, x, v, &travel, &mut out);
    }
    for (a, act) in instance.activities.iter().enumerate() {
        for t in 0..instance.num_slots() {
            let assigned = x.count(a, t);
            if assigned > act.demand {
                out.push(Violation::Overstaffed {
                    activity: a,
                    slot: t,
                    assigned,
                    demand: act.demand,
                });
            }
        }
    }
    Ok(out)
}

/// Violations of the rules that concern volunteer `v` alone (everything
/// except C4).
pub fn check_volunteer(instance: &Instance, x: &Assignment, v: usize) -> Result<Vec<Violation>> {
    check_dims(instance, x)?;
    check_dims(instance, &instance.prior)?;
    let travel = TravelTable::new(instance);
    let mut out = Vec::new();
    volunteer_rules(instance, x, v, &travel, &mut out);
    Ok(out)
}

pub(crate) fn volunteer_rules(
    instance: &Instance,
    x: &Assignment,
    v: usize,
    travel: &TravelTable,
    out: &mut Vec<Violation>,
) {
    let vol = &instance.volunteers[v];
    let consts = &instance.constants;
    let slots = instance.num_slots();

    for (a, act) in instance.activities.iter().enumerate() {
        let capable = vol.has_capability(act.capability);
        for t in 0..slots {
            if x.get(v, a, t) {
                if !capable {
                    out.push(Violation::Capability { volunteer: v, activity: a, slot: t });
                }
                if !vol.is_available(t) {
                    out.push(Violation::Availability { volunteer: v, activity: a, slot: t });
                }
                if !act.is_active(t) {
                    out.push(Violation::OutsideWindow { volunteer: v, activity: a, slot: t });
                }
            } else if instance.prior.get(v, a, t) {
                out.push(Violation::Preempted { volunteer: v, activity: a, slot: t });
            }
        }
    }

    for t in 0..slots {
        let n = (0..instance.num_activities()).filter(|&a| x.get(v, a, t)).count() as u32;
        if n > 1 {
            out.push(Violation::DoubleBooked { volunteer: v, slot: t, activities: n });
        }
    }

    let worked = vol.carry_in.worked_slots + x.total_working_time(v);
    if worked > consts.tau_max {
        out.push(Violation::WorkingTime { volunteer: v, worked, limit: consts.tau_max });
    }

    let runs = x.volunteer_runs(v);
    let past = vol.carry_in.last_run;
    for run in &runs {
        let mut effective = run.len() as u32;
        if let Some(p) = past {
            if run.start == 0 && p.idle_slots == 0 && p.activity == run.activity {
                effective += p.length;
            }
        }
        if effective < consts.tau_min {
            out.push(Violation::ShortRun { run: *run, effective_len: effective, min: consts.tau_min });
        }
    }

    let Some(first) = runs.first() else { return };
    match past {
        None => {
            let earliest = vol.initial_travel_to(first.activity) as usize;
            if first.start < earliest {
                out.push(Violation::InitialTravel { run: *first, earliest });
            }
        }
        Some(p) => {
            let gap = first.start as i64 + p.idle_slots as i64;
            let required = travel.get(p.activity, first.activity);
            if gap < required as i64 {
                out.push(Violation::Travel { volunteer: v, from: None, to: *first, gap, required });
            }
        }
    }
    for pair in runs.windows(2) {
        let (prev, next) = (pair[0], pair[1]);
        let gap = next.start as i64 - prev.end as i64 - 1;
        // overlaps are reported as C5
        if gap < 0 {
            continue;
        }
        let required = travel.get(prev.activity, next.activity);
        if gap < required as i64 {
            out.push(Violation::Travel { volunteer: v, from: Some(prev), to: next, gap, required });
        }
    }
}
