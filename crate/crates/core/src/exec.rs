//! Execution policy: rayon data parallelism when the `parallel` feature is on,
//! plain iteration otherwise. Every parallel path has a sequential twin that
//! produces identical results.

/// How data-parallel kernels are run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Runs two closures, possibly concurrently.
    pub fn join<A, B, FA, FB>(self, a: FA, b: FB) -> (A, B)
    where
        A: Send,
        B: Send,
        FA: FnOnce() -> A + Send,
        FB: FnOnce() -> B + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => rayon::join(a, b),
            _ => (a(), b()),
        }
    }

    /// Sums `f` over fixed-size chunks of `items`; chunk partial sums are
    /// combined left to right so the result does not depend on thread count.
    pub fn chunked_sum<T, F>(self, items: &[T], chunk: usize, f: F) -> f64
    where
        T: Sync,
        F: Fn(&T) -> f64 + Sync + Send,
    {
        let chunks: Vec<&[T]> = items.chunks(chunk.max(1)).collect();
        let partial = self.map(&chunks, |c| c.iter().map(&f).sum::<f64>());
        partial.into_iter().sum()
    }
}
