//! Exact lexicographic solver for tiny instances, and relative gaps.

mod gap;
mod raw;
mod runs;

pub use gap::{default_epsilon, relative_gap, GapReport};
pub use raw::{solve_raw_enumeration, RAW_MAX_ACTIVITIES, RAW_MAX_SLOTS, RAW_MAX_VOLUNTEERS};
pub use runs::solve_exact;

use crate::domain::{Assignment, Instance};
use crate::error::{Error, Result};
use crate::objectives::ObjectiveVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_volunteers: usize,
    pub max_activities: usize,
    pub max_slots: usize,
    /// Search nodes visited before giving up.
    pub max_states: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_volunteers: 4,
            max_activities: 3,
            max_slots: 8,
            max_states: 10_000_000,
        }
    }
}

impl OracleLimits {
    pub fn admits(&self, instance: &Instance) -> bool {
        self.check(instance).is_ok()
    }

    pub(crate) fn check(&self, instance: &Instance) -> Result<()> {
        let dims = [
            ("volunteers", instance.num_volunteers(), self.max_volunteers),
            ("activities", instance.num_activities(), self.max_activities),
            ("slots", instance.num_slots(), self.max_slots),
        ];
        for (what, got, max) in dims {
            if got > max {
                return Err(Error::Refused(format!("{got} {what} exceeds the limit of {max}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub assignment: Assignment,
    pub objectives: ObjectiveVector,
    pub states: u64,
}
