use alloc::vec::Vec;

/// Runs an indexed map and returns results in index order.
///
/// Implementations may evaluate in parallel but must place the result of
/// `f(i)` at position `i`; all reductions downstream are sequential, so the
/// output never depends on the implementation.
pub trait Executor {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

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
