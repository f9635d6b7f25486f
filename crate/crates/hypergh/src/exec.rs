//! Execution strategy for the data-parallel hot loops.
//!
//! With the `parallel` feature (default) these fan out over rayon; without it
//! they degrade to plain sequential iteration. Both helpers are
//! order-preserving, so results are bit-identical regardless of worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Returns `f(i)` for the first index (in increasing order) where it is `Some`.
pub(crate) fn find_map_first_idx<T, F>(n: usize, f: F) -> Option<T>
where
    F: Fn(usize) -> Option<T> + Sync + Send,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(f)
    }
}

/// Order-preserving map over `0..n`.
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
