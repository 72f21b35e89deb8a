//! Execution modes for the crate's hot loops.
//!
//! Every operation that fans out over an enumeration (neighborhood profiles,
//! the bounded-color matching loop, cycle scans, trial sweeps) accepts an
//! [`ExecMode`]. Results are identical in both modes: parallel runs either
//! preserve input order or merge through order-independent rules, so the mode
//! only changes wall-clock time.
//!
//! With the `parallel` feature disabled, [`ExecMode::Parallel`] silently
//! degrades to sequential execution; callers never need to feature-gate.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// True when this mode will actually fan out over worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Order-preserving map.
pub fn map_collect<T, U, F>(mode: ExecMode, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        return items.into_par_iter().map(f).collect();
    }
    let _ = mode;
    items.into_iter().map(f).collect()
}

/// First `Some` in input order; later items may be inspected speculatively
/// but never win over an earlier hit.
pub fn find_map_first<T, U, F>(mode: ExecMode, items: Vec<T>, f: F) -> Option<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Option<U> + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        return items.into_par_iter().find_map_first(f);
    }
    let _ = mode;
    items.into_iter().find_map(f)
}
