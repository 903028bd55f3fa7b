//! Trial-level data parallelism.
//!
//! Trials are independent and own their generators, so results depend only on
//! the trial index. With the `parallel` feature the map runs on rayon; either
//! way the output is in trial order.

/// Sequential map over `0..n`.
pub fn map_trials_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Rayon map over `0..n`, collected in index order.
#[cfg(feature = "parallel")]
pub fn map_trials_par<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map over `0..n` using the configured backend.
pub fn map_trials<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_trials_par(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_trials_seq(n, f)
    }
}
