//! Order-preserving map helpers with a data-parallel fast path.
//!
//! With the `parallel` feature (default), `map_ordered` fans work out over
//! rayon and collects results in input order, so callers observe identical
//! output regardless of thread count. Without the feature every map runs
//! sequentially. `map_ordered_seq` is always sequential and exists so the
//! bench suite can compare both paths in one build.

/// Map `f` over `items`, preserving input order in the output.
#[cfg(feature = "parallel")]
pub fn map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    map_ordered_seq(items, f)
}

/// Always-sequential variant; the baseline the bench suite compares against.
pub fn map_ordered_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Run `f` inside a thread pool of the requested width. Width 0 or 1, or a
/// build without the `parallel` feature, runs `f` on the caller's thread.
#[cfg(feature = "parallel")]
pub fn with_thread_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads <= 1 {
        return serial_scope(f);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(feature = "parallel")]
fn serial_scope<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    // A one-thread pool keeps rayon's work-stealing out of the picture so
    // parallelism=1 is byte-for-byte reproducible.
    match rayon::ThreadPoolBuilder::new().num_threads(1).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_thread_pool<R: Send>(_threads: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved() {
        let input: Vec<u64> = (0..1000).collect();
        let seq = map_ordered_seq(input.clone(), |x| x * 3);
        let par = with_thread_pool(4, || map_ordered(input, |x| x * 3));
        assert_eq!(seq, par);
    }

    #[test]
    fn single_thread_pool_matches() {
        let input: Vec<u64> = (0..100).collect();
        let a = with_thread_pool(1, || map_ordered(input.clone(), |x| x + 1));
        let b = with_thread_pool(8, || map_ordered(input, |x| x + 1));
        assert_eq!(a, b);
    }
}
