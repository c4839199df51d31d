//! Workloads, imbalance measures, supply weights and the lexicographic
//! objective vector.
//!
//! Everything here is exact: workloads are `Ratio<i64>`, objective values
//! are arbitrary-precision rationals.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::domain::Instance;
use crate::error::{Error, Result};
use crate::rational::{positive_part, widen, Rational, SmallRatio};
use crate::Assignment;

/// `L[a][t]` and `Lbar[p][t]` for one assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkloadTable {
    slots: usize,
    workload: Vec<SmallRatio>,
    level_workload: Vec<SmallRatio>,
    level_demand: Vec<u64>,
}

impl WorkloadTable {
    /// Builds the table from the assignment's cached head counts.
    pub fn from_assignment(instance: &Instance, x: &Assignment) -> Self {
        Self::build(instance, |a, t| x.count(a, t) as u64)
    }

    /// Builds the table by summing the tensor directly, ignoring caches.
    pub fn recompute(instance: &Instance, x: &Assignment) -> Self {
        let nv = instance.num_volunteers();
        Self::build(instance, |a, t| (0..nv).filter(|&v| x.get(v, a, t)).count() as u64)
    }

    fn build(instance: &Instance, assigned: impl Fn(usize, usize) -> u64) -> Self {
        let slots = instance.num_slots();
        let levels = instance.priorities.levels as usize;
        let mut workload = Vec::with_capacity(instance.num_activities() * slots);
        let mut level_assigned = vec![0u64; levels * slots];
        let mut level_demand = vec![0u64; levels * slots];
        for (a, act) in instance.activities.iter().enumerate() {
            let p = act.priority as usize - 1;
            for t in 0..slots {
                let n = assigned(a, t);
                workload.push(SmallRatio::new(n as i64, act.demand as i64));
                if act.is_active(t) {
                    level_assigned[p * slots + t] += n;
                    level_demand[p * slots + t] += act.demand as u64;
                }
            }
        }
        let level_workload = level_assigned
            .iter()
            .zip(&level_demand)
            .map(|(&n, &d)| if d == 0 { SmallRatio::zero() } else { SmallRatio::new(n as i64, d as i64) })
            .collect();
        Self {
            slots,
            workload,
            level_workload,
            level_demand,
        }
    }

    pub fn workload(&self, a: usize, t: usize) -> SmallRatio {
        self.workload[a * self.slots + t]
    }

    /// Average workload of level `p` (1-based) in slot `t`; zero when no
    /// activity of that level is active.
    pub fn level_workload(&self, p: u32, t: usize) -> SmallRatio {
        self.level_workload[(p as usize - 1) * self.slots + t]
    }

    /// `n_{p,t}`: total demand of active level-`p` activities in slot `t`.
    pub fn level_demand(&self, p: u32, t: usize) -> u64 {
        self.level_demand[(p as usize - 1) * self.slots + t]
    }
}

/// `L[a][t] = (1/n_a) * sum_v x[v][a][t]`.
pub fn workload(instance: &Instance, x: &Assignment, a: usize, t: usize) -> SmallRatio {
    SmallRatio::new(x.count(a, t) as i64, instance.activities[a].demand as i64)
}

/// `Lbar[p][t]`, zero when no activity of level `p` is active in `t`.
pub fn avg_priority_workload(instance: &Instance, x: &Assignment, p: u32, t: usize) -> SmallRatio {
    let (mut n, mut d) = (0i64, 0i64);
    for (a, act) in instance.activities.iter().enumerate() {
        if act.priority == p && act.is_active(t) {
            n += x.count(a, t) as i64;
            d += act.demand as i64;
        }
    }
    if d == 0 {
        SmallRatio::zero()
    } else {
        SmallRatio::new(n, d)
    }
}

fn level_active(instance: &Instance, p: u32, t: usize) -> bool {
    instance.activities.iter().any(|a| a.priority == p && a.is_active(t))
}

/// Workload imbalance between adjacent levels `p`, `q` of one class:
/// `(Lbar_p - sigma_{q,p}^-1 Lbar_q)+` when `p = q + 1`,
/// `(Lbar_p - sigma_{p,q} Lbar_q)+` when `p = q - 1`.
/// Zero when either level has no active activity in `t`.
pub fn lambda_imbalance(instance: &Instance, x: &Assignment, p: u32, q: u32, t: usize) -> Result<Rational> {
    let ps = &instance.priorities;
    let lower = p.min(q);
    if p.abs_diff(q) != 1 || !ps.adjacent_in_class(lower) {
        return Err(Error::input(format!(
            "levels {p} and {q} are not adjacent within one priority class"
        )));
    }
    let sigma = *ps
        .sigma
        .get(&lower)
        .ok_or_else(|| Error::input(format!("no balancing factor for levels {lower} and {}", lower + 1)))?;
    if !level_active(instance, p, t) || !level_active(instance, q, t) {
        return Ok(Rational::zero());
    }
    let lp = widen(avg_priority_workload(instance, x, p, t));
    let lq = widen(avg_priority_workload(instance, x, q, t));
    Ok(lambda_from(lp, lq, p > q, sigma))
}

fn lambda_from(lp: Rational, lq: Rational, p_is_upper: bool, sigma: SmallRatio) -> Rational {
    let factor = if p_is_upper { widen(sigma.recip()) } else { widen(sigma) };
    positive_part(lp - factor * lq)
}

/// `(L[a][t] - L[b][t])+`.
pub fn delta_imbalance(instance: &Instance, x: &Assignment, a: usize, b: usize, t: usize) -> SmallRatio {
    let d = workload(instance, x, a, t) - workload(instance, x, b, t);
    if d.is_negative() {
        SmallRatio::zero()
    } else {
        d
    }
}

/// Capable-and-available volunteer supply per (capability, slot), the
/// denominator of the supply weight.
#[derive(Debug, Clone)]
pub struct SupplyWeights {
    slots: usize,
    supply: Vec<u64>,
}

impl SupplyWeights {
    pub fn new(instance: &Instance) -> Self {
        let slots = instance.num_slots();
        let caps = instance.capabilities.len();
        let mut supply = vec![0u64; caps * slots];
        for v in &instance.volunteers {
            for (c, _) in v.capabilities.iter().enumerate().filter(|(_, &has)| has) {
                if c >= caps {
                    continue;
                }
                for (t, _) in v.availability.iter().enumerate().filter(|(_, &av)| av) {
                    if t < slots {
                        supply[c * slots + t] += 1;
                    }
                }
            }
        }
        Self { slots, supply }
    }

    pub fn supply(&self, capability: usize, t: usize) -> u64 {
        self.supply[capability * self.slots + t]
    }

    /// `d[a][t] = min(1, n_a r[a][t] / supply)`; 1 when active with zero
    /// supply, 0 when inactive.
    pub fn weight(&self, instance: &Instance, a: usize, t: usize) -> SmallRatio {
        let act = &instance.activities[a];
        if !act.is_active(t) {
            return SmallRatio::zero();
        }
        let s = self.supply(act.capability, t);
        if s == 0 || act.demand as u64 >= s {
            SmallRatio::from_integer(1)
        } else {
            SmallRatio::new(act.demand as i64, s as i64)
        }
    }
}

pub fn supply_weight(instance: &Instance, a: usize, t: usize) -> SmallRatio {
    SupplyWeights::new(instance).weight(instance, a, t)
}

/// Objective values in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjectiveVector {
    /// Time-weighted assignments per class, highest class first
    /// (maximised).
    pub priority: Vec<Rational>,
    /// Imbalance against the balancing factors within classes (minimised).
    pub intra_class: Rational,
    /// Imbalance between same-level activities (minimised).
    pub inter_activity: Rational,
}

impl ObjectiveVector {
    pub fn zero(num_classes: usize) -> Self {
        Self {
            priority: vec![Rational::zero(); num_classes],
            intra_class: Rational::zero(),
            inter_activity: Rational::zero(),
        }
    }

    pub fn num_classes(&self) -> usize {
        self.priority.len()
    }

    /// All `K + 2` values in lexicographic order.
    pub fn values(&self) -> Vec<Rational> {
        let mut out = self.priority.clone();
        out.push(self.intra_class.clone());
        out.push(self.inter_activity.clone());
        out
    }

    pub fn from_values(mut values: Vec<Rational>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::input(format!("objective vector needs at least 3 values, got {}", values.len())));
        }
        let inter_activity = values.pop().unwrap();
        let intra_class = values.pop().unwrap();
        Ok(Self {
            priority: values,
            intra_class,
            inter_activity,
        })
    }

    /// Whether objective `i` (0-based, lexicographic order) is maximised.
    pub fn is_maximized(&self, i: usize) -> bool {
        i < self.priority.len()
    }
}

/// Evaluates every objective of `x`. Feasibility is the caller's concern.
pub fn objective_vector(instance: &Instance, x: &Assignment) -> ObjectiveVector {
    let ps = &instance.priorities;
    let k = ps.num_classes();
    let slots = instance.num_slots();
    let table = WorkloadTable::from_assignment(instance, x);

    let mut priority = vec![Rational::zero(); k];
    for (a, act) in instance.activities.iter().enumerate() {
        let Some(class) = ps.class_of(act.priority) else { continue };
        let mut sum = SmallRatio::zero();
        for t in 0..slots {
            if act.is_active(t) {
                let n = x.count(a, t) as i64;
                if n > 0 {
                    sum += instance.constants.weights[t] * n;
                }
            }
        }
        priority[k - 1 - class] += widen(sum);
    }

    let active_level = |p: u32, t: usize| table.level_demand(p, t) > 0;
    let mut intra_class = Rational::zero();
    for (ci, class) in ps.classes.iter().enumerate() {
        if !ps.alpha(ci) {
            continue;
        }
        for &p in class {
            if !class.contains(&(p + 1)) {
                continue;
            }
            let Some(&sigma) = ps.sigma.get(&p) else { continue };
            for t in 0..slots {
                if !active_level(p, t) || !active_level(p + 1, t) {
                    continue;
                }
                let lo = widen(table.level_workload(p, t));
                let hi = widen(table.level_workload(p + 1, t));
                intra_class += lambda_from(lo.clone(), hi.clone(), false, sigma);
                intra_class += lambda_from(hi, lo, true, sigma);
            }
        }
    }

    let weights = SupplyWeights::new(instance);
    let mut inter_activity = Rational::zero();
    let mut group: Vec<(SmallRatio, SmallRatio)> = Vec::new();
    for p in 1..=ps.levels {
        for t in 0..slots {
            group.clear();
            group.extend(
                instance
                    .activities
                    .iter()
                    .enumerate()
                    .filter(|(_, act)| act.priority == p && act.is_active(t))
                    .map(|(a, _)| (table.workload(a, t), weights.weight(instance, a, t))),
            );
            if group.len() > 1 {
                inter_activity += weighted_pairwise_excess(&mut group);
            }
        }
    }

    ObjectiveVector {
        priority,
        intra_class,
        inter_activity,
    }
}

/// `sum over ordered pairs (i, j) of d_i d_j (L_i - L_j)+` for `(L, d)`
/// entries, in O(n log n): after sorting by workload, entry `i` exceeds all
/// earlier entries, so its terms collapse to `d_i (L_i D - S)` with `D`, `S`
/// the running sums of `d` and `d L`.
fn weighted_pairwise_excess(group: &mut [(SmallRatio, SmallRatio)]) -> Rational {
    group.sort();
    let mut total = Rational::zero();
    let mut d_sum = Rational::zero();
    let mut dl_sum = Rational::zero();
    for &(l, d) in group.iter() {
        let (l, d) = (widen(l), widen(d));
        total += &d * (&l * &d_sum - &dl_sum);
        dl_sum += &d * &l;
        d_sum += d;
    }
    total
}

/// Lexicographic comparison; `Greater` means `u` is better than `v`.
/// Priority values are maximised, the two imbalances minimised.
pub fn lex_compare(u: &ObjectiveVector, v: &ObjectiveVector) -> Result<Ordering> {
    if u.num_classes() != v.num_classes() {
        return Err(Error::input(format!(
            "objective vectors have {} and {} priority classes",
            u.num_classes(),
            v.num_classes()
        )));
    }
    for (a, b) in u.priority.iter().zip(&v.priority) {
        match a.cmp(b) {
            Ordering::Equal => continue,
            ord => return Ok(ord),
        }
    }
    Ok(v
        .intra_class
        .cmp(&u.intra_class)
        .then_with(|| v.inter_activity.cmp(&u.inter_activity)))
}
