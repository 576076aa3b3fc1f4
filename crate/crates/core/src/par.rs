//! Execution mode for the data-parallel loops.
//!
//! Callers choose [`Execution::Parallel`] or [`Execution::Sequential`] at run
//! time. Without the `parallel` feature both modes run sequentially. Work
//! items carry their own seeds, so the output is identical in either mode.

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `f` over `0..len` and collects the results in index order.
    pub fn map_range<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Maps `f` over a slice and collects the results in order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Folds `0..len` into per-worker accumulators and merges them.
    ///
    /// `merge` must be associative and commutative for the result to be
    /// independent of how the range is split.
    pub fn fold_range<A, Init, Fold, Merge>(
        self,
        len: usize,
        init: Init,
        fold: Fold,
        merge: Merge,
    ) -> A
    where
        A: Send,
        Init: Fn() -> A + Sync + Send,
        Fold: Fn(A, usize) -> A + Sync + Send,
        Merge: Fn(A, A) -> A + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len)
                .into_par_iter()
                .fold(&init, &fold)
                .reduce(&init, &merge);
        }
        let _ = &merge;
        (0..len).fold(init(), fold)
    }
}
