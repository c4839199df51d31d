//! A common interface over the heuristic and the exact oracle.

use crate::domain::{Assignment, Instance};
use crate::error::Result;
use crate::heuristic::{self, SolveOptions, TraceStep};
use crate::oracle::{self, OracleLimits};

#[derive(Debug, Clone)]
pub struct SolverOutput {
    pub assignment: Assignment,
    /// Heuristic: volunteer feasibility evaluations. Oracle: search states.
    pub evaluations: u64,
    /// Heuristic steps, when the solver records them.
    pub trace: Vec<TraceStep>,
}

pub trait Solver {
    fn name(&self) -> &str;
    fn solve(&self, instance: &Instance) -> Result<SolverOutput>;
}

#[derive(Debug, Clone, Copy)]
pub struct Heuristic {
    pub options: SolveOptions,
}

impl Default for Heuristic {
    fn default() -> Self {
        Self {
            options: SolveOptions {
                record_trace: false,
                reuse_candidates: true,
            },
        }
    }
}

impl Solver for Heuristic {
    fn name(&self) -> &str {
        "heuristic"
    }

    fn solve(&self, instance: &Instance) -> Result<SolverOutput> {
        let sol = heuristic::solve_with(instance, self.options)?;
        Ok(SolverOutput {
            assignment: sol.assignment,
            evaluations: sol.evaluations,
            trace: sol.trace,
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExactOracle {
    pub limits: OracleLimits,
}

impl Solver for ExactOracle {
    fn name(&self) -> &str {
        "oracle"
    }

    fn solve(&self, instance: &Instance) -> Result<SolverOutput> {
        let sol = oracle::solve_exact(instance, &self.limits)?;
        Ok(SolverOutput {
            assignment: sol.assignment,
            evaluations: sol.states,
            trace: Vec::new(),
        })
    }
}
