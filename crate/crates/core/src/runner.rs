//! Replicate scheduling. Results are always returned in replicate order, so
//! any aggregation over them is independent of the worker count.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Workers(usize);

impl Workers {
    /// `0` means "available parallelism".
    pub fn new(count: usize) -> Self {
        if count == 0 {
            Self::available()
        } else {
            Workers(count)
        }
    }

    pub fn single() -> Self {
        Workers(1)
    }

    pub fn available() -> Self {
        Workers(std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn count(&self) -> usize {
        self.0
    }

    /// Runs `job(i, seed_i)` for `i` in `0..n` and collects the results in
    /// index order. The first failing replicate (lowest index) is reported.
    pub fn map<T, F>(&self, seeds: &[u64], job: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, u64) -> Result<T> + Sync + Send,
    {
        let wrap = |(i, &seed): (usize, &u64)| {
            job(i, seed).map_err(|e| Error::Replicate {
                replicate: i,
                seed,
                source: Box::new(e),
            })
        };
        #[cfg(feature = "parallel")]
        if self.0 > 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.0)
                .build()
                .map_err(|e| Error::config(format!("thread pool: {e}")))?;
            let results: Vec<Result<T>> =
                pool.install(|| seeds.par_iter().enumerate().map(wrap).collect());
            return results.into_iter().collect();
        }
        seeds.iter().enumerate().map(wrap).collect()
    }
}

impl Default for Workers {
    fn default() -> Self {
        Self::available()
    }
}
