use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use super::{halle_catalog, Catalog, Scenario};
use crate::domain::{
    check_feasibility, Assignment, CarryIn, Horizon, Instance, PastRun, PriorityStructure, TaskActivity, Volunteer,
};
use crate::error::{Error, Result};
use crate::heuristic::TraceStep;
use crate::objectives::{objective_vector, ObjectiveVector};
use crate::solver::Solver;

/// Assignment history on the scenario clock, used to build each instance's
/// prior assignment and carry-in.
#[derive(Debug, Clone)]
pub struct RollingState<'a> {
    scenario: &'a Scenario,
    catalog: &'a Catalog,
    /// Per scenario volunteer: clock slot -> activity index.
    history: Vec<BTreeMap<u64, usize>>,
}

impl<'a> RollingState<'a> {
    pub fn new(scenario: &'a Scenario) -> Self {
        Self::with_catalog(scenario, halle_catalog())
    }

    pub fn with_catalog(scenario: &'a Scenario, catalog: &'a Catalog) -> Self {
        Self {
            scenario,
            catalog,
            history: vec![BTreeMap::new(); scenario.volunteers.len()],
        }
    }

    /// Instance `i`: the volunteers and tasks released so far, with the
    /// part of earlier assignments that falls inside the window fixed as
    /// the prior assignment.
    pub fn instance(&self, i: u32) -> Result<Instance> {
        let cfg = &self.scenario.config;
        if i as usize >= self.scenario.num_instances() {
            return Err(Error::input(format!("scenario has no instance {}", i + 1)));
        }
        let slots = cfg.num_slots as usize;
        let start = cfg.window_start(i);

        let mut activities = Vec::new();
        for task_id in self.scenario.tasks_up_to(i) {
            let task = self
                .catalog
                .task(task_id)
                .ok_or_else(|| Error::input(format!("task {task_id} is not in the catalog")))?;
            for act in &task.activities {
                activities.push(TaskActivity {
                    task_id,
                    label: act.label.clone(),
                    capability: act.capability,
                    priority: task.priority,
                    demand: act.demand,
                    window: vec![true; slots],
                    location: task.location,
                });
            }
        }

        let num_caps = self.catalog.capabilities.len();
        let pool = self.scenario.pool_size(i);
        let mut volunteers = Vec::with_capacity(pool);
        for (id, sv) in self.scenario.volunteers[..pool].iter().enumerate() {
            let mut caps = vec![false; num_caps];
            for &c in &sv.capabilities {
                caps[c] = true;
            }
            let availability = (0..slots as u64)
                .map(|t| (sv.available_from..=sv.available_until).contains(&(start + t)))
                .collect();
            // travel starts when the volunteer joins the pool
            let elapsed = start - cfg.window_start(sv.arrival_instance);
            let travel = u64::from(cfg.initial_travel_slots).saturating_sub(elapsed) as u32;
            let mut vol = Volunteer::new(caps, availability, travel);
            vol.carry_in = carry_in(&self.history[id], start);
            volunteers.push(vol);
        }

        let mut instance = Instance::new(
            Horizon {
                num_slots: slots,
                slot_minutes: cfg.slot_minutes,
            },
            self.catalog.capabilities.clone(),
            volunteers,
            activities,
            PriorityStructure::halle(),
            cfg.constants(),
        );
        let mut prior = instance.empty_assignment();
        for (v, hist) in self.history[..pool].iter().enumerate() {
            for (&clock, &a) in hist.range(start..start + slots as u64) {
                prior.set(v, a, (clock - start) as usize);
            }
        }
        instance.prior = prior;
        Ok(instance)
    }

    /// Records instance `i`'s assignment on the scenario clock.
    pub fn commit(&mut self, i: u32, x: &Assignment) -> Result<()> {
        let start = self.scenario.config.window_start(i);
        let (nv, na, nt) = x.dims();
        if nv > self.history.len() {
            return Err(Error::input("assignment has more volunteers than the scenario"));
        }
        for v in 0..nv {
            for t in 0..nt {
                if let Some(a) = x.activity_at(v, t) {
                    debug_assert!(a < na);
                    self.history[v].insert(start + t as u64, a);
                }
            }
        }
        Ok(())
    }

    /// Slots worked on the scenario clock before `clock`.
    pub fn worked_before(&self, v: usize, clock: u64) -> usize {
        self.history[v].range(..clock).count()
    }
}

fn carry_in(hist: &BTreeMap<u64, usize>, start: u64) -> CarryIn {
    let mut before = hist.range(..start).rev();
    let Some((&last, &activity)) = before.next() else {
        return CarryIn::default();
    };
    let mut length = 1u32;
    let mut expect = last;
    for (&clock, &a) in before {
        if a != activity || clock + 1 != expect {
            break;
        }
        length += 1;
        expect = clock;
    }
    CarryIn {
        worked_slots: hist.range(..start).count() as u32,
        last_run: Some(PastRun {
            activity,
            length,
            idle_slots: (start - 1 - last) as u32,
        }),
    }
}

#[derive(Debug, Clone)]
pub struct InstanceOutcome {
    /// 0-based instance index.
    pub index: u32,
    pub window_start: u64,
    pub num_volunteers: usize,
    pub num_activities: usize,
    pub assignment: Assignment,
    pub objectives: ObjectiveVector,
    /// Solver time, including its own setup.
    pub wall_clock: Duration,
    pub evaluations: u64,
    pub feasible: bool,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug)]
pub struct RollingResult {
    pub solver: String,
    pub outcomes: Vec<InstanceOutcome>,
    /// The error that stopped the run early, with the failing instance.
    pub failure: Option<(u32, Error)>,
}

impl RollingResult {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn roll_horizon(scenario: &Scenario, solver: &dyn Solver) -> RollingResult {
    roll_horizon_with(scenario, solver, |_, _| {})
}

/// Solves the instances in order, feeding each assignment forward. The
/// observer sees every instance together with its outcome.
pub fn roll_horizon_with(
    scenario: &Scenario,
    solver: &dyn Solver,
    mut observer: impl FnMut(&Instance, &InstanceOutcome),
) -> RollingResult {
    let mut state = RollingState::new(scenario);
    let mut outcomes = Vec::with_capacity(scenario.num_instances());
    let mut failure = None;
    for i in 0..scenario.num_instances() as u32 {
        let step = (|| -> Result<(Instance, InstanceOutcome)> {
            let instance = state.instance(i)?;
            let clock = Instant::now();
            let out = solver.solve(&instance)?;
            let wall_clock = clock.elapsed();
            let feasible = check_feasibility(&instance, &out.assignment)?.is_empty();
            let objectives = objective_vector(&instance, &out.assignment);
            let outcome = InstanceOutcome {
                index: i,
                window_start: scenario.config.window_start(i),
                num_volunteers: instance.num_volunteers(),
                num_activities: instance.num_activities(),
                assignment: out.assignment,
                objectives,
                wall_clock,
                evaluations: out.evaluations,
                feasible,
                trace: out.trace,
            };
            Ok((instance, outcome))
        })();
        match step {
            Ok((instance, outcome)) => {
                if let Err(e) = state.commit(i, &outcome.assignment) {
                    failure = Some((i, e));
                    break;
                }
                observer(&instance, &outcome);
                outcomes.push(outcome);
            }
            Err(e) => {
                failure = Some((i, e));
                break;
            }
        }
    }
    RollingResult {
        solver: solver.name().to_string(),
        outcomes,
        failure,
    }
}
