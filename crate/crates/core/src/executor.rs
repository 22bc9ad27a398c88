//! Master/worker fitness evaluation.
//!
//! The solver loop (the master) submits a whole generation of candidate
//! schedules and blocks until every fitness is back. Workers evaluate
//! concurrently on shared read-only data; results come back in
//! submission order and are identical for any worker count, since
//! evaluation is pure integer arithmetic and all randomness stays on
//! the master.

use std::time::Instant;

use thiserror::Error;

use crate::constraints::{evaluate, EvalError, PenaltyBreakdown};
use crate::model::{RosterInstance, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecutorConfig {
    /// Concurrent evaluation workers; 1 means fully sequential.
    pub workers: usize,
}

impl Default for ExecutorConfig {
    fn default() -> Self {
        ExecutorConfig { workers: 1 }
    }
}

impl ExecutorConfig {
    pub fn new(workers: usize) -> Self {
        ExecutorConfig { workers }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExecutorError {
    #[error("executor needs at least one worker")]
    NoWorkers,
    #[error("evaluation of schedule {index} failed: {source}")]
    Evaluation { index: usize, source: EvalError },
}

/// Evaluates every schedule; `result[i]` is the breakdown of
/// `schedules[i]`. The first failing element (by index) is reported.
pub fn evaluate_batch(
    schedules: &[Schedule],
    instance: &RosterInstance,
    config: &ExecutorConfig,
) -> Result<Vec<PenaltyBreakdown>, ExecutorError> {
    if config.workers == 0 {
        return Err(ExecutorError::NoWorkers);
    }
    let mut results: Vec<Option<Result<PenaltyBreakdown, EvalError>>> =
        vec![None; schedules.len()];

    let workers = config.workers.min(schedules.len());
    if workers <= 1 {
        for (slot, schedule) in results.iter_mut().zip(schedules) {
            *slot = Some(evaluate(schedule, instance));
        }
    } else {
        let chunk = schedules.len().div_ceil(workers);
        std::thread::scope(|scope| {
            for (in_chunk, out_chunk) in
                schedules.chunks(chunk).zip(results.chunks_mut(chunk))
            {
                scope.spawn(move || {
                    for (slot, schedule) in out_chunk.iter_mut().zip(in_chunk) {
                        *slot = Some(evaluate(schedule, instance));
                    }
                });
            }
        });
    }

    results
        .into_iter()
        .enumerate()
        .map(|(index, slot)| {
            slot.expect("every slot is filled")
                .map_err(|source| ExecutorError::Evaluation { index, source })
        })
        .collect()
}

/// Wall-clock seconds of a workload on the monotonic clock, plus its
/// result. No averaging; callers repeat and aggregate as needed.
pub fn timing_probe<T>(workload: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let value = workload();
    (value, start.elapsed().as_secs_f64())
}
