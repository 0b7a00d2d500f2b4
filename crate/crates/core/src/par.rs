//! Index-space helpers that run on rayon when the `parallel` feature is on
//! and fall back to plain loops otherwise.
//!
//! Every helper works over `0..n` and returns results in index order, so the
//! outcome never depends on the execution mode or on thread scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Uses rayon when compiled with the `parallel` feature, sequential otherwise.
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// `f(0), …, f(n-1)` collected in order.
pub fn map<T, F>(exec: Exec, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// The smallest index `i` with `f(i) = Some(_)`, paired with that value.
pub fn find_first<T, F>(exec: Exec, n: u64, f: F) -> Option<(u64, T)>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n)
            .into_par_iter()
            .find_map_first(|i| f(i).map(|v| (i, v)));
    }
    let _ = exec;
    (0..n).find_map(|i| f(i).map(|v| (i, v)))
}

/// Number of indices for which `f` holds.
pub fn count<F>(exec: Exec, n: u64, f: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().filter(|&i| f(i)).count() as u64;
    }
    let _ = exec;
    (0..n).filter(|&i| f(i)).count() as u64
}
