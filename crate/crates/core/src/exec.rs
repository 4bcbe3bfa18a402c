//! Execution strategy for the data-parallel enumerations (census grids,
//! enumeration boxes, batches of proof traces).
//!
//! Every parallel path collects its partial results in input order and
//! reduces them sequentially afterwards, so results never depend on the
//! scheduling. With the `parallel` feature disabled, [`Exec::Parallel`]
//! silently runs sequentially.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Map `f` over `items`, preserving order.
    pub fn map<I, T, F>(self, items: Vec<I>, f: F) -> Vec<T>
    where
        I: Send,
        T: Send,
        F: Fn(I) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            _ => items.into_iter().map(f).collect(),
        }
    }

    /// Map `f` over an integer range, preserving order.
    pub fn map_range<T, F>(self, range: std::ops::RangeInclusive<i64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(i64) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(f).collect()
            }
            _ => range.map(f).collect(),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}
