//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the [`ExecMode::Parallel`]
//! mode fans work out over the rayon global pool. Without the feature, or
//! with [`ExecMode::Sequential`], the same closures run in order on the
//! calling thread. Output order is always the input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How batch work (document analysis, topic batches, sweep points) is run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// True when work will actually be spread over worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Fallible [`map`]: stops at (and returns) the first error in input order.
pub fn try_map<T, R, E, F>(mode: ExecMode, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        // rayon's Result collector may surface any error; gather first so the
        // reported one is the earliest in input order.
        let all: Vec<Result<R, E>> = items.par_iter().map(f).collect();
        return all.into_iter().collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}
