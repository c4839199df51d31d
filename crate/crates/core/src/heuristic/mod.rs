//! Priority-driven constructive heuristic.
//!
//! Volunteers are ranked once by capability scarcity. The main loop then
//! repeatedly takes the highest priority class that still has unstaffed
//! activity-slot pairs, the earliest such slot, and the activity with the
//! lowest balancing-weighted workload in that slot. The volunteer able to
//! start earliest is assigned for the maximal feasible interval around the
//! slot; if nobody can, the pair is dropped.

mod active;
mod interval;
mod scarcity;

use std::collections::HashMap;

pub use active::{select_best_combination, select_highest_priority_subset, ActiveSet, ClassSubset};
pub use interval::{feasible_candidates, maximal_feasible_interval, Candidate, Workspace};
pub use scarcity::{scarcity_sort, scarcity_sort_with, ScarcityOrder};

use crate::domain::{validate_instance, Assignment, Instance};
use crate::error::{Error, Result};
use crate::objectives::SupplyWeights;

/// What one iteration of the main loop did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Assigned { volunteer: usize, start: usize, end: usize, saturated: usize },
    Removed,
}

/// One trace record. Indices are 0-based; `class` is the 1-based class
/// index `k*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub iteration: u64,
    pub class: usize,
    pub activity: usize,
    pub slot: usize,
    pub evaluations: u64,
    pub outcome: StepOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub record_trace: bool,
    /// Keep the candidate intervals computed for an activity-slot pair
    /// while the loop stays on that slot, updating them as workloads fill
    /// instead of re-running the feasibility evaluation. Produces the same
    /// assignment as re-evaluating every iteration.
    pub reuse_candidates: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            record_trace: true,
            reuse_candidates: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub assignment: Assignment,
    pub trace: Vec<TraceStep>,
    /// Volunteers examined by the feasibility evaluation, summed over the
    /// run.
    pub evaluations: u64,
    pub iterations: u64,
}

/// State visible to an observer after each iteration.
pub struct Observation<'a> {
    pub step: &'a TraceStep,
    pub assignment: &'a Assignment,
    pub active: &'a ActiveSet,
}

/// `|A| * |T| * |V|`, the worst-case number of feasibility evaluations.
pub fn step_count_bound(instance: &Instance) -> u64 {
    instance.num_activities() as u64 * instance.num_slots() as u64 * instance.num_volunteers() as u64
}

pub fn solve(instance: &Instance) -> Result<Solution> {
    solve_observed(instance, SolveOptions::default(), |_| {})
}

pub fn solve_with(instance: &Instance, options: SolveOptions) -> Result<Solution> {
    solve_observed(instance, options, |_| {})
}

#[derive(Debug, Clone, Copy)]
struct Cached {
    volunteer: usize,
    lo: usize,
    hi: usize,
}

/// Candidate extents per activity for the current `(class, slot)` phase.
#[derive(Default)]
struct PhaseCache {
    phase: Option<(usize, usize)>,
    lists: HashMap<usize, Vec<Cached>>,
}

impl PhaseCache {
    fn enter(&mut self, phase: (usize, usize)) {
        if self.phase != Some(phase) {
            self.phase = Some(phase);
            self.lists.clear();
        }
    }
}

pub fn solve_observed(
    instance: &Instance,
    options: SolveOptions,
    mut observer: impl FnMut(&Observation<'_>),
) -> Result<Solution> {
    let defects = validate_instance(instance);
    if !defects.is_empty() {
        return Err(Error::InvalidInstance(defects));
    }

    let supply = SupplyWeights::new(instance);
    let order = scarcity_sort_with(instance, &supply);
    let mut ws = Workspace::new(instance);
    let mut active = ActiveSet::new(instance, ws.assignment());
    let mut cache = PhaseCache::default();
    let mut trace = Vec::new();
    let mut evaluations = 0u64;
    let mut iteration = 0u64;

    while !active.is_empty() {
        let subset = select_highest_priority_subset(&active)?;
        let class = subset.class;
        let (a, t) = select_best_combination(instance, ws.assignment(), &subset)?;

        let mut step_evals = 0u64;
        let candidates: Vec<Candidate> = if options.reuse_candidates {
            cache.enter((class, t));
            match cache.lists.get_mut(&a) {
                Some(list) => {
                    let mut out = Vec::with_capacity(list.len());
                    list.retain(|c| match ws.capped(c.volunteer, c.lo, c.hi, t) {
                        Some(cand) => {
                            out.push(cand);
                            true
                        }
                        None => false,
                    });
                    out
                }
                None => {
                    let mut list = Vec::new();
                    let mut out = Vec::new();
                    for &v in &order.volunteers {
                        step_evals += 1;
                        if !ws.passes_guards(v, a) {
                            continue;
                        }
                        let Some((lo, hi)) = ws.extents(v, a, t) else { continue };
                        if let Some(cand) = ws.capped(v, lo, hi, t) {
                            list.push(Cached { volunteer: v, lo, hi });
                            out.push(cand);
                        }
                    }
                    cache.lists.insert(a, list);
                    out
                }
            }
        } else {
            let (out, n) = ws.feasible_candidates(&order, a, t);
            step_evals = n;
            out
        };
        evaluations += step_evals;

        let best = candidates.iter().min_by_key(|c| c.start).copied();
        let outcome = match best {
            Some(chosen) => {
                let saturated = ws.assign(a, chosen);
                for &u in &saturated {
                    active.remove(a, u);
                }
                if options.reuse_candidates {
                    for list in cache.lists.values_mut() {
                        list.retain(|c| c.volunteer != chosen.volunteer);
                    }
                    if saturated.contains(&t) {
                        cache.lists.remove(&a);
                    } else if let Some(list) = cache.lists.get_mut(&a) {
                        for c in list.iter_mut() {
                            for &u in &saturated {
                                if u < t && u >= c.lo {
                                    c.lo = u + 1;
                                }
                                if u > t && u <= c.hi {
                                    c.hi = u - 1;
                                }
                            }
                        }
                    }
                }
                StepOutcome::Assigned {
                    volunteer: chosen.volunteer,
                    start: chosen.start,
                    end: chosen.end,
                    saturated: saturated.len(),
                }
            }
            None => {
                active.remove(a, t);
                cache.lists.remove(&a);
                StepOutcome::Removed
            }
        };

        let step = TraceStep {
            iteration,
            class: class + 1,
            activity: a,
            slot: t,
            evaluations: step_evals,
            outcome,
        };
        observer(&Observation {
            step: &step,
            assignment: ws.assignment(),
            active: &active,
        });
        if options.record_trace {
            trace.push(step);
        }
        iteration += 1;
    }

    Ok(Solution {
        assignment: ws.into_assignment(),
        trace,
        evaluations,
        iterations: iteration,
    })
}
