//! Deterministic replicate-parallel execution.
//!
//! Replicates are split into fixed-size chunks by index. Each chunk is
//! reduced on whichever worker picks it up, and chunk results are returned
//! in chunk order, so the final reduction never depends on the schedule or
//! the worker count.

use std::ops::Range;

use rayon::prelude::*;

/// Replicates per work item.
pub const CHUNK: u64 = 2048;

/// Execution settings that never affect results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunConfig {
    /// Worker threads; 0 means the available parallelism.
    pub workers: usize,
}

impl RunConfig {
    pub fn with_workers(workers: usize) -> Self {
        Self { workers }
    }

    pub fn resolved_workers(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}

/// Maps `job` over the chunks of `first..first + count` and returns the
/// per-chunk results in index order.
pub fn map_chunks<T, F>(config: &RunConfig, first: u64, count: u64, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let chunks: Vec<Range<u64>> = (0..count.div_ceil(CHUNK))
        .map(|c| {
            let start = first + c * CHUNK;
            start..(start + CHUNK).min(first + count)
        })
        .collect();
    let workers = config.resolved_workers();
    if workers == 1 || chunks.len() <= 1 {
        return chunks.into_iter().map(job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    pool.install(|| chunks.into_par_iter().map(job).collect())
}
