//! Replica farming on a fixed-size thread pool.

use rayon::prelude::*;
use rayon::ThreadPoolBuilder;

use crate::error::{Error, Result};

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs `f(0..replicas)` on `workers` threads. Output order follows the
/// replica index, so anything reduced from it is independent of `workers`.
pub fn farm<T, F>(workers: usize, replicas: u32, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u32) -> Result<T> + Sync + Send,
{
    if workers == 0 {
        return Err(Error::param("workers", "must be at least 1"));
    }
    let pool = ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    pool.install(|| (0..replicas).into_par_iter().map(&f).collect())
}
