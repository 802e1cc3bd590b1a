//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`]
//! dispatches to rayon; without it every call runs on the current thread.
//! Results always come back in input order, so output never depends on
//! scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// True when this execution mode actually fans out to a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `items.iter().map(f).collect()`, possibly across threads.
pub fn map_collect<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// `items.iter().flat_map(f).collect()`, possibly across threads.
pub fn flat_map_collect<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().flat_map_iter(f).collect();
    }
    let _ = exec;
    items.iter().flat_map(f).collect()
}

/// True iff `pred` holds for every item.
pub fn all<T, F>(exec: Execution, items: &[T], pred: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().all(pred);
    }
    let _ = exec;
    items.iter().all(pred)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_and_keep_order() {
        let items: Vec<u64> = (0..1000).collect();
        let par = map_collect(Execution::Parallel, &items, |x| x * x);
        let seq = map_collect(Execution::Sequential, &items, |x| x * x);
        assert_eq!(par, seq);
        assert_eq!(par[999], 998001);
        let fpar = flat_map_collect(Execution::Parallel, &items, |&x| vec![x; (x % 3) as usize]);
        let fseq = flat_map_collect(Execution::Sequential, &items, |&x| vec![x; (x % 3) as usize]);
        assert_eq!(fpar, fseq);
        assert!(all(Execution::Parallel, &items, |&x| x < 1000));
        assert!(!all(Execution::Sequential, &items, |&x| x < 999));
    }
}
