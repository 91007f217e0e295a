use casimir_core::exec::Executor;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::CliError;

/// Fixed-size rayon pool. Results come back in index order, so reductions
/// done by the caller are independent of the worker count.
pub struct RayonExecutor {
    pool: ThreadPool,
}

impl RayonExecutor {
    pub fn new(workers: usize) -> Result<Self, CliError> {
        let pool = ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
        Ok(RayonExecutor { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn map_range<T, F>(&self, start: usize, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool
            .install(|| (start..start + len).into_par_iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_results() {
        let ex = RayonExecutor::new(3).unwrap();
        let v = ex.map_range(5, 100, |i| i * i);
        assert_eq!(v, (5..105).map(|i| i * i).collect::<Vec<_>>());
        assert_eq!(ex.workers(), 3);
    }
}
