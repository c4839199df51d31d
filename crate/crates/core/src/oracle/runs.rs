//! Branch and bound over per-volunteer run schedules.
//!
//! Each volunteer's legal schedules are listed up front as sequences of
//! runs, with the working-time, travel, duration, window and prior rules
//! applied while the runs are generated. The search then picks one
//! schedule per volunteer, keeping per-slot headcounts within demand.

use std::cmp::Ordering;

use num_integer::Integer;

use super::{ExactSolution, OracleLimits};
use crate::domain::{validate_instance, Assignment, Instance, TravelTable};
use crate::error::{Error, Result};
use crate::objectives::{lex_compare, objective_vector, ObjectiveVector};

#[derive(Debug, Clone)]
struct Schedule {
    /// `(activity, start, end)`, inclusive, in start order.
    runs: Vec<(usize, usize, usize)>,
    /// Time-weighted slots per class, highest class first, scaled to
    /// integers.
    value: Vec<i64>,
}

struct Generator<'a> {
    inst: &'a Instance,
    v: usize,
    travel: &'a TravelTable,
    prior: Vec<Option<usize>>,
    scaled_weights: Vec<i64>,
    /// Index into `value` for each activity, `None` for unclassified.
    value_index: Vec<Option<usize>>,
    out: Vec<Schedule>,
    budget: u64,
}

impl Generator<'_> {
    fn prior_free(&self, from: usize, to: usize) -> bool {
        self.prior[from..to].iter().all(Option::is_none)
    }

    fn emit(&mut self, runs: &[(usize, usize, usize)]) -> Result<()> {
        if self.out.len() as u64 >= self.budget {
            return Err(Error::ResourceExhausted("too many volunteer schedules".into()));
        }
        let mut value = vec![0i64; self.inst.priorities.num_classes()];
        for &(a, s, e) in runs {
            if let Some(i) = self.value_index[a] {
                value[i] += self.scaled_weights[s..=e].iter().sum::<i64>();
            }
        }
        self.out.push(Schedule {
            runs: runs.to_vec(),
            value,
        });
        Ok(())
    }

    fn extend(&mut self, runs: &mut Vec<(usize, usize, usize)>, from: usize, worked: u32) -> Result<()> {
        let inst = self.inst;
        let slots = inst.num_slots();
        let vol = &inst.volunteers[self.v];
        let tau_min = inst.constants.tau_min;
        let cap = inst.constants.tau_max;
        if self.prior_free(from, slots) {
            self.emit(runs)?;
        }
        let prev = runs.last().copied();
        for s in from..slots {
            if s > from && self.prior[s - 1].is_some() {
                break;
            }
            for a in 0..inst.num_activities() {
                let act = &inst.activities[a];
                if !vol.has_capability(act.capability) {
                    continue;
                }
                let mut carried = 0u32;
                let reachable = match prev {
                    Some((pa, _, pe)) => {
                        s as u64 >= pe as u64 + 1 + self.travel.get(pa, a) as u64 && !(pa == a && s == pe + 1)
                    }
                    None => match vol.carry_in.last_run {
                        Some(past) => {
                            if s == 0 && past.idle_slots == 0 && past.activity == a {
                                carried = past.length;
                            }
                            s as u64 + past.idle_slots as u64 >= self.travel.get(past.activity, a) as u64
                        }
                        None => s as u64 >= vol.initial_travel_to(a) as u64,
                    },
                };
                if !reachable {
                    continue;
                }
                for e in s..slots {
                    let slot_ok = vol.is_available(e)
                        && act.is_active(e)
                        && self.prior[e].is_none_or(|p| p == a);
                    let len = (e - s + 1) as u32;
                    if !slot_ok || vol.carry_in.worked_slots + worked + len > cap {
                        break;
                    }
                    if len + carried >= tau_min {
                        runs.push((a, s, e));
                        self.extend(runs, e + 1, worked + len)?;
                        runs.pop();
                    }
                }
            }
        }
        Ok(())
    }
}

struct Search<'a> {
    inst: &'a Instance,
    schedules: Vec<Vec<Schedule>>,
    /// `bounds[i]`: componentwise maximum value reachable by volunteers
    /// `i..`.
    bounds: Vec<Vec<i64>>,
    counts: Vec<u32>,
    x: Assignment,
    current: Vec<i64>,
    best: Option<(Vec<i64>, ObjectiveVector, Assignment)>,
    states: u64,
    max_states: u64,
}

impl Search<'_> {
    fn fits(&self, sched: &Schedule) -> bool {
        let slots = self.inst.num_slots();
        sched.runs.iter().all(|&(a, s, e)| {
            let demand = self.inst.activities[a].demand;
            (s..=e).all(|t| self.counts[a * slots + t] < demand)
        })
    }

    fn apply(&mut self, v: usize, sched_idx: usize, on: bool) {
        let slots = self.inst.num_slots();
        let sched = &self.schedules[v][sched_idx];
        for &(a, s, e) in &sched.runs {
            for t in s..=e {
                if on {
                    self.counts[a * slots + t] += 1;
                    self.x.set(v, a, t);
                } else {
                    self.counts[a * slots + t] -= 1;
                    self.x.unset(v, a, t);
                }
            }
        }
        for (c, d) in self.current.iter_mut().zip(&sched.value) {
            if on {
                *c += d;
            } else {
                *c -= d;
            }
        }
    }

    fn leaf(&mut self) -> Result<()> {
        let replace = match &self.best {
            None => true,
            Some((value, vector, _)) => match self.current.cmp(value) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    let candidate = objective_vector(self.inst, &self.x);
                    lex_compare(&candidate, vector)? == Ordering::Greater
                }
            },
        };
        if replace {
            let vector = objective_vector(self.inst, &self.x);
            self.best = Some((self.current.clone(), vector, self.x.clone()));
        }
        Ok(())
    }

    fn dfs(&mut self, v: usize) -> Result<()> {
        self.states += 1;
        if self.states > self.max_states {
            return Err(Error::ResourceExhausted(format!(
                "search exceeded {} states",
                self.max_states
            )));
        }
        if v == self.schedules.len() {
            return self.leaf();
        }
        if let Some((best, _, _)) = &self.best {
            let bound: Vec<i64> = self.current.iter().zip(&self.bounds[v]).map(|(c, b)| c + b).collect();
            if bound < *best {
                return Ok(());
            }
        }
        for i in 0..self.schedules[v].len() {
            if !self.fits(&self.schedules[v][i]) {
                continue;
            }
            self.apply(v, i, true);
            let res = self.dfs(v + 1);
            self.apply(v, i, false);
            res?;
        }
        Ok(())
    }
}

/// A lexicographically optimal assignment. Among equally good assignments
/// the first one met in the search order is returned.
pub fn solve_exact(instance: &Instance, limits: &OracleLimits) -> Result<ExactSolution> {
    limits.check(instance)?;
    let defects = validate_instance(instance);
    if !defects.is_empty() {
        return Err(Error::InvalidInstance(defects));
    }

    let scale = instance
        .constants
        .weights
        .iter()
        .fold(1i64, |acc, w| acc.lcm(w.denom()));
    let scaled_weights: Vec<i64> = instance
        .constants
        .weights
        .iter()
        .map(|w| w.numer() * (scale / w.denom()))
        .collect();
    let num_classes = instance.priorities.num_classes();
    let value_index: Vec<Option<usize>> = instance
        .activities
        .iter()
        .map(|act| instance.priorities.class_of(act.priority).map(|k| num_classes - 1 - k))
        .collect();

    let travel = instance.travel_table();
    let mut schedules = Vec::with_capacity(instance.num_volunteers());
    for v in 0..instance.num_volunteers() {
        let mut gen = Generator {
            inst: instance,
            v,
            travel: &travel,
            prior: (0..instance.num_slots())
                .map(|t| instance.prior.activity_at(v, t))
                .collect(),
            scaled_weights: scaled_weights.clone(),
            value_index: value_index.clone(),
            out: Vec::new(),
            budget: limits.max_states,
        };
        gen.extend(&mut Vec::new(), 0, 0)?;
        let mut list = gen.out;
        // Promising schedules first; the sort is stable so the order stays
        // canonical.
        list.sort_by(|a, b| b.value.cmp(&a.value));
        schedules.push(list);
    }

    let mut bounds = vec![vec![0i64; num_classes]; schedules.len() + 1];
    for v in (0..schedules.len()).rev() {
        let mut b = bounds[v + 1].clone();
        for (k, bk) in b.iter_mut().enumerate() {
            *bk += schedules[v].iter().map(|s| s.value[k]).max().unwrap_or(0);
        }
        bounds[v] = b;
    }

    let mut search = Search {
        inst: instance,
        schedules,
        bounds,
        counts: vec![0; instance.num_activities() * instance.num_slots()],
        x: instance.empty_assignment(),
        current: vec![0; num_classes],
        best: None,
        states: 0,
        max_states: limits.max_states,
    };
    search.dfs(0)?;
    let states = search.states;
    match search.best {
        Some((_, objectives, assignment)) => Ok(ExactSolution {
            assignment,
            objectives,
            states,
        }),
        None => Err(Error::input("the prior assignment admits no feasible completion")),
    }
}
