//! Pluggable evaluation of independent work items.
//!
//! Grid points, walker blocks and quadrature panels are pure functions of
//! their index; an executor only decides where they run. Results are always
//! returned in index order, so reductions downstream are deterministic.

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// Evaluate `f(0), …, f(n-1)` and return the values in index order.
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every work item on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
