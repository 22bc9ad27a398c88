//! Solver outcome and error types shared by both metaheuristics.

use thiserror::Error;

use crate::executor::ExecutorError;
use crate::model::Schedule;

/// Outcome of a solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_schedule: Schedule,
    /// Fitness of `best_schedule`; equals re-evaluating it from scratch.
    pub best_fitness: u64,
    /// Best-so-far fitness after each iteration; non-increasing.
    pub history: Vec<u64>,
    pub wall_time_s: f64,
    /// Number of fitness evaluations performed.
    pub evaluations: u64,
}

impl RunResult {
    /// Equality on everything the seed determines; wall time is a
    /// measurement and excluded.
    pub fn same_outcome(&self, other: &RunResult) -> bool {
        self.best_schedule == other.best_schedule
            && self.best_fitness == other.best_fitness
            && self.history == other.history
            && self.evaluations == other.evaluations
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Executor(#[from] ExecutorError),
}
