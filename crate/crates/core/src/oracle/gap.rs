use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::objectives::ObjectiveVector;
use crate::rational::Rational;

/// Per-objective relative gaps, in the order of [`ObjectiveVector::values`].
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub gaps: Vec<Rational>,
    /// Set where the reference value is too close to zero for the ratio to
    /// mean much: a maximised optimum of 0, or a minimised optimum below
    /// epsilon (the gap is then divided by epsilon instead).
    pub near_zero: Vec<bool>,
}

impl GapReport {
    pub fn is_zero(&self) -> bool {
        self.gaps.iter().all(Zero::is_zero)
    }
}

/// `10^-9`.
pub fn default_epsilon() -> Rational {
    Rational::new(1.into(), 1_000_000_000.into())
}

pub fn relative_gap(heuristic: &ObjectiveVector, optimal: &ObjectiveVector, epsilon: &Rational) -> Result<GapReport> {
    if heuristic.num_classes() != optimal.num_classes() {
        return Err(Error::input(format!(
            "objective vectors have {} and {} priority classes",
            heuristic.num_classes(),
            optimal.num_classes()
        )));
    }
    if !epsilon.is_positive() {
        return Err(Error::input("epsilon must be positive"));
    }
    let heur = heuristic.values();
    let opt = optimal.values();
    let mut gaps = Vec::with_capacity(opt.len());
    let mut near_zero = Vec::with_capacity(opt.len());
    for (i, (h, o)) in heur.iter().zip(&opt).enumerate() {
        if optimal.is_maximized(i) {
            if o.is_positive() {
                gaps.push((o - h) / o);
                near_zero.push(false);
            } else {
                gaps.push(Rational::zero());
                near_zero.push(true);
            }
        } else if o >= epsilon {
            gaps.push((h - o) / o);
            near_zero.push(false);
        } else {
            gaps.push((h - o) / epsilon);
            near_zero.push(true);
        }
    }
    Ok(GapReport { gaps, near_zero })
}
