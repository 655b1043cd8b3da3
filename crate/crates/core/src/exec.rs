//! Execution strategy for independent jobs.
//!
//! The core crate never spawns threads itself. Callers that want parallelism
//! (elbow scans, branch-and-bound node batches, sweep rows, per-scenario
//! re-solves) pass an [`Executor`]; results always come back in input order
//! so the outcome does not depend on scheduling.

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// Applies `f` to every item and returns the results in input order.
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(usize, T) -> R + Sync;
}

/// Runs every job on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(usize, T) -> R + Sync,
    {
        items.into_iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}
