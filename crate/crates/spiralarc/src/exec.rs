//! Execution policy for the data-parallel sweeps.

use serde::{Deserialize, Serialize};

/// Whether sweeps fan out over the rayon pool. Without the `parallel` feature both
/// variants run sequentially.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

/// Maps `f` over `0..n` and concatenates the results in index order.
pub(crate) fn flat_map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Vec<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            let parts: Vec<Vec<T>> = (0..n).into_par_iter().map(&f).collect();
            parts.into_iter().flatten().collect()
        }
        _ => (0..n).flat_map(f).collect(),
    }
}

/// Maps `f` over `items`, preserving order.
pub(crate) fn map_slice<S, T, F>(exec: Exec, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}
