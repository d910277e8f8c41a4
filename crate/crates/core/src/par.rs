//! Execution strategy for the data-parallel kernels.
//!
//! With the `parallel` feature (on by default) `Exec::Parallel` fans work out
//! over rayon's global pool. Without it every call runs sequentially. Results
//! are always returned in input order, so output never depends on the
//! strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
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

impl Exec {
    /// Maps `f` over `0..len`, preserving order.
    pub fn map_range<R, F>(self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().map(f).collect(),
            _ => (0..len).map(f).collect(),
        }
    }

    /// Maps `f` over a slice, preserving order.
    pub fn map_slice<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Maps `f` over every unordered index pair `(i, j)` with `i < j < len`,
    /// in row-major order.
    pub fn map_pairs<R, F>(self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize, usize) -> R + Sync + Send,
    {
        let rows = self.map_range(len, |i| ((i + 1)..len).map(|j| f(i, j)).collect::<Vec<_>>());
        rows.into_iter().flatten().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let a = Exec::Sequential.map_pairs(7, |i, j| i * 10 + j);
        let b = Exec::Parallel.map_pairs(7, |i, j| i * 10 + j);
        assert_eq!(a, b);
        assert_eq!(a.len(), 21);
        assert_eq!(a[0], 1);
    }
}
