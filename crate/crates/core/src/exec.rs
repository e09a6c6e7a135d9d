// SPDX-License-Identifier: Apache-2.0

//! Execution strategy for the data-parallel kernels.
//!
//! Every hot loop in the crate (table construction, exhaustive scans,
//! column enumeration, multiset scans) goes through the helpers here. With the
//! `parallel` feature they fan out over rayon; without it, or with
//! [`Exec::Sequential`], they run on the calling thread. Results are identical
//! either way: searches report the first hit in index order, never the first
//! hit in completion order.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a kernel should iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when the `parallel` feature is disabled.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

// Below this many items the rayon overhead dominates.
#[cfg(feature = "parallel")]
const MIN_PARALLEL: usize = 64;

impl Exec {
    #[cfg(feature = "parallel")]
    fn parallel_for(self, len: usize) -> bool {
        self.parallel_at(len, MIN_PARALLEL)
    }

    #[cfg(feature = "parallel")]
    fn parallel_at(self, len: usize, min: usize) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel && len >= min
    }

    /// First `Some` produced by `f` over `range`, in index order.
    pub fn find_map_first<T, F>(self, range: Range<usize>, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(range.len()) {
            return range.into_par_iter().find_map_first(f);
        }
        range.into_iter().find_map(f)
    }

    /// First `Ok(Some)` in index order; an error at a smaller index wins over
    /// a hit at a larger one.
    pub fn try_find_map_first<T, E, F>(self, range: Range<usize>, f: F) -> Result<Option<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<Option<T>, E> + Sync + Send,
    {
        let hit = self.find_map_first(range, |i| match f(i) {
            Ok(None) => None,
            Ok(Some(v)) => Some(Ok(v)),
            Err(e) => Some(Err(e)),
        });
        hit.transpose()
    }

    pub fn all<F>(self, range: Range<usize>, pred: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(range.len()) {
            return range.into_par_iter().all(pred);
        }
        range.into_iter().all(pred)
    }

    pub fn map_collect<T, F>(self, range: Range<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(range.len()) {
            return range.into_par_iter().map(f).collect();
        }
        range.into_iter().map(f).collect()
    }

    /// Order-preserving map over a slice. Meant for heavy per-item work, so it
    /// parallelizes from two items up.
    pub fn map_slice<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_at(items.len(), 2) {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }
}
