//! Deterministic fan-out over a fixed number of worker threads.
//!
//! Work is always split into the same units regardless of the worker count,
//! and partial results are combined in unit order, so the result of a call is
//! a function of its inputs only.

use rayon::prelude::*;

/// Runs `f` inside a pool of `workers` threads (at least one).
pub(crate) fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    if workers <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
    {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// `Σ_{i in 0..n} f(i)` over `workers` threads.
pub(crate) fn sum_over<F>(workers: usize, n: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    if workers <= 1 {
        return (0..n).map(&f).sum();
    }
    with_workers(workers, || (0..n).into_par_iter().map(&f).sum())
}

/// Maps every unit in `0..n` and returns the results in unit order.
pub(crate) fn map_ordered<T, F>(workers: usize, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if workers <= 1 {
        return (0..n).map(&f).collect();
    }
    with_workers(workers, || (0..n).into_par_iter().map(&f).collect())
}
