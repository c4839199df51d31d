use crate::domain::{Assignment, Instance, TravelTable};

use super::ScarcityOrder;

const FREE: u32 = u32::MAX;

/// A volunteer and the interval it would be assigned, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub volunteer: usize,
    pub start: usize,
    pub end: usize,
}

/// Assignment under construction plus a per-volunteer slot occupancy map.
#[derive(Debug, Clone)]
pub struct Workspace<'a> {
    instance: &'a Instance,
    travel: TravelTable,
    x: Assignment,
    /// `occupancy[v * T + t]`: activity index or `FREE`.
    occupancy: Vec<u32>,
}

impl<'a> Workspace<'a> {
    /// Starts from the instance's prior assignment.
    pub fn new(instance: &'a Instance) -> Self {
        Self::with_assignment(instance, instance.prior.clone())
    }

    pub fn with_assignment(instance: &'a Instance, x: Assignment) -> Self {
        let slots = instance.num_slots();
        let mut occupancy = vec![FREE; instance.num_volunteers() * slots];
        for v in 0..instance.num_volunteers() {
            for t in 0..slots {
                if let Some(a) = x.activity_at(v, t) {
                    occupancy[v * slots + t] = a as u32;
                }
            }
        }
        Self {
            instance,
            travel: instance.travel_table(),
            x,
            occupancy,
        }
    }

    pub fn assignment(&self) -> &Assignment {
        &self.x
    }

    pub fn into_assignment(self) -> Assignment {
        self.x
    }

    fn occupant(&self, v: usize, t: usize) -> Option<usize> {
        let a = self.occupancy[v * self.instance.num_slots() + t];
        (a != FREE).then_some(a as usize)
    }

    /// Cheap per-volunteer checks made before computing an interval:
    /// remaining working time and the required capability.
    pub fn passes_guards(&self, v: usize, a: usize) -> bool {
        self.instance.remaining_budget(&self.x, v) > 0
            && self.instance.volunteers[v].has_capability(self.instance.activities[a].capability)
    }

    /// Widest interval around `t` in which `v` could work `a`, ignoring the
    /// working-time cap and the minimum duration.
    pub fn extents(&self, v: usize, a: usize, t: usize) -> Option<(usize, usize)> {
        let inst = self.instance;
        let slots = inst.num_slots();
        let vol = &inst.volunteers[v];
        let act = &inst.activities[a];
        let open = |u: usize| {
            vol.is_available(u) && act.is_active(u) && self.x.count(a, u) < act.demand && self.occupant(v, u).is_none()
        };
        if t >= slots || !open(t) {
            return None;
        }

        let floor: i64 = match (0..t).rev().find_map(|u| self.occupant(v, u).map(|b| (u, b))) {
            Some((u, b)) => u as i64 + 1 + self.travel.get(b, a) as i64,
            None => match vol.carry_in.last_run {
                Some(past) => self.travel.get(past.activity, a) as i64 - past.idle_slots as i64,
                None => vol.initial_travel_to(a) as i64,
            },
        };
        let ceiling: i64 = match (t + 1..slots).find_map(|u| self.occupant(v, u).map(|b| (u, b))) {
            Some((u, b)) => u as i64 - 1 - self.travel.get(a, b) as i64,
            None => slots as i64 - 1,
        };
        let ti = t as i64;
        if ti < floor || ti > ceiling {
            return None;
        }

        let mut lo = t;
        while lo > 0 && (lo as i64) > floor && open(lo - 1) {
            lo -= 1;
        }
        let mut hi = t;
        while (hi as i64) < ceiling && open(hi + 1) {
            hi += 1;
        }
        Some((lo, hi))
    }

    /// Trims `[lo, hi]` to the working time `v` has left, starting as early
    /// as the cap allows while still covering `t`. `None` when the result is
    /// shorter than the minimum duration.
    pub fn capped(&self, v: usize, lo: usize, hi: usize, t: usize) -> Option<Candidate> {
        let budget = self.instance.remaining_budget(&self.x, v) as usize;
        if budget == 0 || lo > t || t > hi {
            return None;
        }
        let start = lo.max((t + 1).saturating_sub(budget));
        let end = hi.min(start + budget - 1);
        if end + 1 - start < self.instance.constants.tau_min as usize {
            return None;
        }
        Some(Candidate {
            volunteer: v,
            start,
            end,
        })
    }

    /// The interval `v` would be assigned to `a` around `t`, if any.
    pub fn maximal_feasible_interval(&self, v: usize, a: usize, t: usize) -> Option<Candidate> {
        if !self.passes_guards(v, a) {
            return None;
        }
        let (lo, hi) = self.extents(v, a, t)?;
        self.capped(v, lo, hi, t)
    }

    /// Candidates for `(a, t)` in scarcity order, and the number of
    /// volunteers examined.
    pub fn feasible_candidates(&self, order: &ScarcityOrder, a: usize, t: usize) -> (Vec<Candidate>, u64) {
        let mut out = Vec::new();
        let mut examined = 0;
        for &v in &order.volunteers {
            examined += 1;
            if let Some(c) = self.maximal_feasible_interval(v, a, t) {
                out.push(c);
            }
        }
        (out, examined)
    }

    /// Applies the candidate and returns the slots whose workload reached 1.
    pub fn assign(&mut self, a: usize, c: Candidate) -> Vec<usize> {
        let slots = self.instance.num_slots();
        let demand = self.instance.activities[a].demand;
        let mut saturated = Vec::new();
        for t in c.start..=c.end {
            self.x.set(c.volunteer, a, t);
            self.occupancy[c.volunteer * slots + t] = a as u32;
            if self.x.count(a, t) == demand {
                saturated.push(t);
            }
        }
        saturated
    }
}

/// [`Workspace::maximal_feasible_interval`] on a standalone assignment.
pub fn maximal_feasible_interval(instance: &Instance, x: &Assignment, v: usize, a: usize, t: usize) -> Option<Candidate> {
    Workspace::with_assignment(instance, x.clone()).maximal_feasible_interval(v, a, t)
}

/// [`Workspace::feasible_candidates`] on a standalone assignment.
pub fn feasible_candidates(instance: &Instance, x: &Assignment, order: &ScarcityOrder, a: usize, t: usize) -> Vec<Candidate> {
    Workspace::with_assignment(instance, x.clone())
        .feasible_candidates(order, a, t)
        .0
}
