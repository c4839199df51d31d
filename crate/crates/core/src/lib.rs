//! Spontaneous volunteer coordination.
//!
//! The crate models the assignment and scheduling of spontaneous volunteers
//! to the activities of disaster-relief tasks over a discretised planning
//! horizon. It provides:
//!
//! * [`domain`]: instances, assignments and the feasibility checker that
//!   defines the solution space,
//! * [`objectives`]: workloads and the lexicographic objective vector,
//! * [`heuristic`]: the priority-driven constructive heuristic,
//! * [`oracle`]: an exhaustive lexicographic solver for tiny instances and
//!   relative-gap grading,
//! * [`scenario`]: the Halle 2013 task catalog, seeded scenario generation
//!   and the rolling-horizon driver,
//! * [`io`]: the `svcp/1` document formats and result CSVs.
//!
//! Indices are 0-based throughout the API (volunteer `v`, activity `a`,
//! slot `t`). Documents written by [`io`] use 1-based ids and slots.

pub mod domain;
pub mod error;
pub mod heuristic;
pub mod io;
pub mod objectives;
pub mod oracle;
pub mod rational;
pub mod scenario;
pub mod solver;

pub use domain::{
    Assignment, Capability, CarryIn, Constants, Horizon, Instance, Location, PastRun, PriorityStructure, Run,
    TaskActivity, Volunteer,
};
pub use error::{Error, Result};
pub use objectives::{lex_compare, objective_vector, ObjectiveVector};
pub use rational::Rational;
