//! Index-parallel map with a sequential fallback.
//!
//! With the `parallel` feature the work is spread over the rayon pool; without it
//! (or when [`Execution::Sequential`] is requested) items run in order. Results are
//! always returned in index order, so reductions over them are deterministic.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Parallel => map_parallel(n, f),
        Execution::Sequential => (0..n).map(f).collect(),
    }
}

#[cfg(feature = "parallel")]
fn map_parallel<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_parallel<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let a = map_indexed(100, Execution::Parallel, |i| i * i);
        let b = map_indexed(100, Execution::Sequential, |i| i * i);
        assert_eq!(a, b);
        assert!(map_indexed(0, Execution::Parallel, |i| i).is_empty());
    }
}
