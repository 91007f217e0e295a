//! Evaluation strategy for independent index-wise work.
//!
//! Summation drivers hand an [`Executor`] a contiguous block of indices and
//! a pure evaluator. The executor may run the block in any order or on any
//! number of threads, but must return results in index order; all reductions
//! happen afterwards on the caller's thread, so the final sums do not depend
//! on how the block was scheduled.

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// Returns `[f(start), f(start + 1), …, f(start + len − 1)]`.
    fn map_range<T, F>(&self, start: usize, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_range<T, F>(&self, start: usize, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (start..start + len).map(f).collect()
    }
}
