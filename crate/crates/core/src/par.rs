//! Data-parallel helpers. With the `parallel` feature the maps run on the
//! current rayon pool; without it they are plain loops. Results are always
//! in index order, so output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `f(0), …, f(count - 1)`.
pub fn map_range<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Like [`map_range`] with per-worker scratch state built by `init`.
pub fn map_range_init<S, T, I, F>(count: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map_init(init, f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut s = init();
        (0..count).map(|i| f(&mut s, i)).collect()
    }
}

/// Runs `op` with `workers` threads available to the maps above; `0` means
/// one per core. Without the `parallel` feature this just calls `op`.
pub fn with_workers<R, F>(workers: usize, op: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        op()
    }
}

/// Whether the crate was built with the rayon backend.
pub const PARALLEL: bool = cfg!(feature = "parallel");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v = with_workers(4, || map_range(1000, |i| i * i));
        assert_eq!(v, (0..1000).map(|i| i * i).collect::<Vec<_>>());
        let w = with_workers(1, || map_range_init(50, Vec::<usize>::new, |s, i| {
            s.push(i);
            i + 1
        }));
        assert_eq!(w, (1..=50).collect::<Vec<_>>());
    }
}
