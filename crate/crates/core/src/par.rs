//! Execution strategy for the data-parallel loops of the crate.
//!
//! With the `parallel` feature (on by default) independent jobs are spread
//! over the rayon pool; without it every strategy runs sequentially. Each job
//! writes only its own slot, so results are bit-identical across strategies.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// `f(0), f(1), ..., f(n - 1)` collected in index order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    pub fn join<A, B, RA, RB>(self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => rayon::join(a, b),
            _ => (a(), b()),
        }
    }
}
