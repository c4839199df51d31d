use std::cmp::Ordering;

use crate::domain::Instance;
use crate::objectives::SupplyWeights;
use crate::rational::{cmp_fractions, SmallRatio};

/// Volunteers sorted by nondecreasing scarcity score, ties by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScarcityOrder {
    pub volunteers: Vec<usize>,
    /// `scores[v]`: the smallest supply weight over the activity-slot pairs
    /// `v` could serve; `None` when there are none (sorted last).
    pub scores: Vec<Option<SmallRatio>>,
}

pub fn scarcity_sort(instance: &Instance) -> ScarcityOrder {
    scarcity_sort_with(instance, &SupplyWeights::new(instance))
}

pub fn scarcity_sort_with(instance: &Instance, supply: &SupplyWeights) -> ScarcityOrder {
    let num_caps = instance.capabilities.len();
    let mut per_capability: Vec<Option<SmallRatio>> = vec![None; num_caps];
    for (a, act) in instance.activities.iter().enumerate() {
        for t in 0..instance.num_slots() {
            if !act.is_active(t) {
                continue;
            }
            let d = supply.weight(instance, a, t);
            let slot = &mut per_capability[act.capability];
            if slot.is_none_or(|cur| d < cur) {
                *slot = Some(d);
            }
        }
    }
    let scores: Vec<Option<SmallRatio>> = instance
        .volunteers
        .iter()
        .map(|vol| {
            per_capability
                .iter()
                .enumerate()
                .filter(|&(c, _)| vol.has_capability(c))
                .filter_map(|(_, d)| *d)
                .min()
        })
        .collect();
    let mut volunteers: Vec<usize> = (0..instance.num_volunteers()).collect();
    volunteers.sort_by(|&a, &b| cmp_scores(scores[a], scores[b]).then(a.cmp(&b)));
    ScarcityOrder { volunteers, scores }
}

fn cmp_scores(a: Option<SmallRatio>, b: Option<SmallRatio>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => cmp_fractions(
            *x.numer() as i128,
            *x.denom() as i128,
            *y.numer() as i128,
            *y.denom() as i128,
        ),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}
