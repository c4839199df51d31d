use std::collections::BTreeSet;

use crate::domain::{Assignment, Instance};
use crate::error::{Error, Result};
use crate::rational::cmp_fractions;

/// Activity-slot pairs that are active and understaffed and have not been
/// given up on, grouped by priority class. Entries are `(slot, activity)`
/// so each class iterates in slot order.
#[derive(Debug, Clone)]
pub struct ActiveSet {
    classes: Vec<BTreeSet<(usize, usize)>>,
    activity_class: Vec<usize>,
    len: usize,
}

impl ActiveSet {
    pub fn new(instance: &Instance, x: &Assignment) -> Self {
        let mut classes = vec![BTreeSet::new(); instance.priorities.num_classes()];
        let mut activity_class = Vec::with_capacity(instance.num_activities());
        let mut len = 0;
        for (a, act) in instance.activities.iter().enumerate() {
            let k = instance.priorities.class_of(act.priority).unwrap_or(usize::MAX);
            activity_class.push(k);
            if k == usize::MAX {
                continue;
            }
            for t in 0..instance.num_slots() {
                if act.is_active(t) && x.count(a, t) < act.demand {
                    classes[k].insert((t, a));
                    len += 1;
                }
            }
        }
        Self {
            classes,
            activity_class,
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, a: usize, t: usize) -> bool {
        self.class_set(a).is_some_and(|s| s.contains(&(t, a)))
    }

    pub fn remove(&mut self, a: usize, t: usize) -> bool {
        let k = self.activity_class.get(a).copied().unwrap_or(usize::MAX);
        let removed = self.classes.get_mut(k).is_some_and(|s| s.remove(&(t, a)));
        if removed {
            self.len -= 1;
        }
        removed
    }

    /// Pairs of class `k` (0-based), as `(activity, slot)`.
    pub fn class_pairs(&self, k: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.classes[k].iter().map(|&(t, a)| (a, t))
    }

    /// All remaining pairs as `(activity, slot)`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.classes.iter().flatten().map(|&(t, a)| (a, t))
    }

    fn class_set(&self, a: usize) -> Option<&BTreeSet<(usize, usize)>> {
        self.activity_class.get(a).and_then(|&k| self.classes.get(k))
    }
}

/// Remaining pairs of the most important class that still has any.
#[derive(Debug, Clone, Copy)]
pub struct ClassSubset<'a> {
    /// 0-based class index.
    pub class: usize,
    members: &'a BTreeSet<(usize, usize)>,
}

impl<'a> ClassSubset<'a> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `(activity, slot)` pairs in slot order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.members.iter().map(|&(t, a)| (a, t))
    }

    pub fn earliest_slot(&self) -> Option<usize> {
        self.members.first().map(|&(t, _)| t)
    }

    /// Activities of the subset active in slot `t`, ascending.
    pub fn activities_at(&self, t: usize) -> impl Iterator<Item = usize> + 'a {
        self.members.range((t, 0)..=(t, usize::MAX)).map(|&(_, a)| a)
    }
}

pub fn select_highest_priority_subset(active: &ActiveSet) -> Result<ClassSubset<'_>> {
    active
        .classes
        .iter()
        .enumerate()
        .rev()
        .find(|(_, s)| !s.is_empty())
        .map(|(class, members)| ClassSubset { class, members })
        .ok_or_else(|| Error::input("no active activity-slot pairs left"))
}

/// The pair `(a*, t*)`: `t*` is the earliest slot of the subset; `a*`
/// minimises `sigma(p_a, p_a + 1) * L_{a,t*}`, ties to the lower index.
pub fn select_best_combination(instance: &Instance, x: &Assignment, subset: &ClassSubset<'_>) -> Result<(usize, usize)> {
    let t = subset
        .earliest_slot()
        .ok_or_else(|| Error::input("empty priority subset"))?;
    let mut best: Option<(usize, i128, i128)> = None;
    for a in subset.activities_at(t) {
        let act = &instance.activities[a];
        let sigma = instance.priorities.selection_weight(act.priority);
        let num = *sigma.numer() as i128 * x.count(a, t) as i128;
        let den = *sigma.denom() as i128 * act.demand as i128;
        let better = match best {
            None => true,
            Some((_, bn, bd)) => cmp_fractions(num, den, bn, bd).is_lt(),
        };
        if better {
            best = Some((a, num, den));
        }
    }
    best.map(|(a, _, _)| (a, t))
        .ok_or_else(|| Error::input("empty priority subset"))
}
