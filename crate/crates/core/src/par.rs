//! Data-parallel helpers. With the `parallel` feature enabled the work is
//! spread over the rayon thread pool; otherwise, or when a caller asks for
//! [`Exec::Sequential`], it runs on the current thread in the same order.

/// Execution strategy for sweeps over independent cells.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

impl Exec {
    /// True when this strategy will actually use the thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Number of threads this strategy runs on.
    pub fn workers(self) -> usize {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return rayon::current_num_threads();
        }
        1
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }

    /// Maps a fallible `f` over `items`, returning the first error in order.
    pub fn try_map<T, R, E, F>(self, items: Vec<T>, f: F) -> Result<Vec<R>, E>
    where
        T: Send,
        R: Send,
        E: Send,
        F: Fn(T) -> Result<R, E> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}
