//! Execution back end for exhaustive sweeps.
//!
//! Sweeps are written against the handful of combinators below. With the
//! `parallel` feature they fan out over rayon's pool when asked to; without
//! it, or with [`Exec::Sequential`], they run as plain iterators. Results are
//! identical in both modes: searches return the lowest-index hit and
//! reductions are order-independent.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a sweep is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this build can actually run in parallel.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// First (lowest index) `Some` produced by `f` over `range`.
pub fn find_first<T, F>(exec: Exec, range: Range<u64>, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().find_map_first(f);
    }
    let _ = exec;
    range.into_iter().find_map(f)
}

/// First `Some` produced by `f` over `items`, by position.
pub fn find_first_in<I, T, F>(exec: Exec, items: &[I], f: F) -> Option<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().find_map_first(f);
    }
    let _ = exec;
    items.iter().find_map(f)
}

/// Map every index and collect in index order.
pub fn map<T, F>(exec: Exec, range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.into_iter().map(f).collect()
}

/// Map every item and collect in order.
pub fn map_in<I, T, F>(exec: Exec, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Fold each index into an accumulator and merge the partial results.
///
/// `merge` must be associative and commutative for the result not to depend
/// on scheduling.
pub fn fold<A, F, M>(exec: Exec, range: Range<u64>, init: A, f: F, merge: M) -> A
where
    A: Send + Clone + Sync,
    F: Fn(A, u64) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range
            .into_par_iter()
            .fold(|| init.clone(), &f)
            .reduce(|| init.clone(), &merge);
    }
    let _ = (exec, &merge);
    range.into_iter().fold(init, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(
                find_first(exec, 0..1000, |i| (i % 97 == 96).then_some(i)),
                Some(96)
            );
            assert_eq!(map(exec, 0..5, |i| i * 2), vec![0, 2, 4, 6, 8]);
            let total = fold(exec, 0..100, 0u64, |a, i| a + i, |a, b| a + b);
            assert_eq!(total, 4950);
        }
    }
}
