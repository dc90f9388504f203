//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] fans out over
//! rayon's global pool; without it every call runs sequentially. Results are
//! always returned in input order, so parallel and sequential runs agree
//! bit for bit.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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

pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Like [`map`], with a per-worker scratch state built by `init`.
pub fn map_init<T, R, S, I, F>(exec: Exec, items: &[T], init: I, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map_init(&init, |s, t| f(s, t)).collect(),
        _ => {
            let mut state = init();
            items.iter().map(|t| f(&mut state, t)).collect()
        }
    }
}

/// Maximum of `f` over `items`; `0.0` for an empty slice. NaN propagates as +inf.
pub fn max_f64<T, F>(exec: Exec, items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    map(exec, items, f)
        .into_iter()
        .fold(0.0, |acc, v| if v.is_nan() { f64::INFINITY } else { acc.max(v) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(Exec::Sequential, &xs, |x| x * x);
        let b = map(Exec::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        let c = map_init(Exec::Parallel, &xs, || 1u64, |s, x| *s + x);
        assert_eq!(c[10], 11);
    }

    #[test]
    fn max_of_empty_is_zero() {
        let xs: Vec<f64> = vec![];
        assert_eq!(max_f64(Exec::default(), &xs, |x| *x), 0.0);
    }
}
