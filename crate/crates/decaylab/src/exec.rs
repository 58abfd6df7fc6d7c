//! Batch helpers: data-parallel with rayon under the `parallel` feature,
//! plain sequential loops otherwise. Per-item work never shares mutable
//! state, so results are identical either way.

#[cfg(feature = "parallel")]
pub fn map_slice<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_indices<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indices<U>(n: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Run `jobs` with at most `threads` workers (sequentially without the
/// `parallel` feature). Results keep the job order.
#[cfg(feature = "parallel")]
pub fn run_jobs<T, U: Send>(
    jobs: Vec<T>,
    threads: usize,
    f: impl Fn(T) -> U + Sync + Send,
) -> Vec<U>
where
    T: Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| jobs.into_par_iter().map(f).collect())
}

#[cfg(not(feature = "parallel"))]
pub fn run_jobs<T, U>(jobs: Vec<T>, _threads: usize, f: impl Fn(T) -> U) -> Vec<U> {
    jobs.into_iter().map(f).collect()
}
