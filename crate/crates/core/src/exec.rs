//! Order-preserving map over a batch, on a rayon pool when the `parallel`
//! feature is on and sequentially otherwise.

/// Apply `f` to every item, returning results in input order. `workers <= 1`
/// always runs on the calling thread.
pub fn map_ordered<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    par_map(items, workers, f)
}

#[cfg(feature = "parallel")]
fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(e) => {
            log::warn!("thread pool unavailable ({e}); running sequentially");
            items.iter().map(f).collect()
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R, F>(items: &[T], _workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Whether this build can actually run work in parallel.
pub const PARALLEL: bool = cfg!(feature = "parallel");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_order() {
        let v: Vec<u64> = (0..1000).collect();
        let seq = map_ordered(&v, 1, |x| x * x);
        let par = map_ordered(&v, 4, |x| x * x);
        assert_eq!(seq, par);
        assert!(map_ordered(&[] as &[u64], 4, |x| *x).is_empty());
    }
}
