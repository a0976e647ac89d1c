//! Thin dispatch layer between the rayon and sequential execution paths.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sum `f(i)` over `0..n`, sequentially.
pub(crate) fn sum_indexed_seq<F>(n: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    (0..n).map(f).sum()
}

/// Sum `f(i)` over `0..n` with the default execution mode.
pub(crate) fn sum_indexed<F>(n: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sum_indexed_seq(n, f)
    }
}

/// Collect `f(i)` for `0..n`, keeping only `Some` results, sequentially.
pub(crate) fn filter_map_indexed_seq<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    (0..n).filter_map(f).collect()
}

/// Collect `f(i)` for `0..n`, keeping only `Some` results.
///
/// Order of the result is the index order in both modes.
pub(crate) fn filter_map_indexed<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().filter_map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        filter_map_indexed_seq(n, f)
    }
}

/// Map `f` over a slice, sequentially.
pub(crate) fn map_slice_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Map `f` over a slice in index order.
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_slice_seq(items, f)
    }
}
