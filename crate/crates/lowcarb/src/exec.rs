//! Thread-pool executor for the solver and studies.

use lowcarb_core::Executor;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Runs jobs on a dedicated rayon pool. Results come back in input order, so
/// output never depends on the thread count.
pub struct Threads {
    pool: Option<ThreadPool>,
}

impl Threads {
    /// `threads <= 1` runs everything on the calling thread.
    pub fn new(threads: usize) -> Self {
        let pool = (threads > 1).then(|| ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool"));
        Self { pool }
    }

    pub fn threads(&self) -> usize {
        self.pool.as_ref().map_or(1, ThreadPool::current_num_threads)
    }
}

impl Executor for Threads {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(usize, T) -> R + Sync,
    {
        match &self.pool {
            Some(pool) if items.len() > 1 => {
                pool.install(|| items.into_par_iter().enumerate().map(|(i, t)| f(i, t)).collect())
            }
            _ => items.into_iter().enumerate().map(|(i, t)| f(i, t)).collect(),
        }
    }
}
