//! Nurse rostering solver library.
//!
//! Builds rosters for instances in the shape of the BCV benchmark
//! family: a nurse × day grid over a small shift catalog, scored by a
//! weighted sum of soft-constraint violations plus a large surcharge per
//! hard violation. Two metaheuristics search that space — ant colony
//! optimization with five pheromone-update variants and particle swarm
//! optimization with the classic velocity-update variants — and both
//! delegate fitness evaluation to a master/worker executor whose results
//! are independent of the worker count. An experiment harness sweeps
//! population sizes and emits CSV for plotting.

pub mod aco;
pub mod constraints;
pub mod executor;
pub mod experiment;
pub mod format;
pub mod model;
pub mod pso;
pub mod random;
pub mod run;
pub mod stats;

#[cfg(test)]
pub(crate) mod testutil;

pub use constraints::{check_hard, evaluate, soft_penalty, HardViolationReport, PenaltyBreakdown};
pub use executor::{evaluate_batch, timing_probe, ExecutorConfig};
pub use format::{parse_instance, parse_schedule, serialize_instance, serialize_schedule};
pub use model::{
    Assignment, ConstraintConfig, Nurse, RosterInstance, Schedule, ShiftType,
    SoftConstraint,
};
pub use run::RunResult;
