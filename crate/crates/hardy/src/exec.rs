//! Thread-pool executor for the core's work items.

use std::env;

use hardy_core::Executor;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "HARDY_THREADS";

#[derive(Debug)]
pub struct Rayon {
    pool: ThreadPool,
}

impl Rayon {
    /// `threads = 0` means one per logical core.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        Ok(Rayon { pool: ThreadPoolBuilder::new().num_threads(threads).build()? })
    }

    /// Pool sized from [`THREADS_ENV`], falling back to the logical core count.
    pub fn from_env() -> Result<Self, String> {
        let threads = match env::var(THREADS_ENV) {
            Ok(v) => v.trim().parse::<usize>().map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))?,
            Err(_) => 0,
        };
        Rayon::new(threads).map_err(|e| e.to_string())
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Rayon {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hardy_core::hmeasure::{harmonic_measure_with, WoSConfig};
    use hardy_core::Serial;

    #[test]
    fn order_is_preserved() {
        let pool = Rayon::new(4).unwrap();
        assert_eq!(pool.threads(), 4);
        let v = pool.map(1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
    }

    #[test]
    fn walkers_agree_with_the_serial_run() {
        let m = "koebe".parse().unwrap();
        let cfg = WoSConfig { n_walkers: 5000, ..Default::default() };
        let a = harmonic_measure_with(&m, 20.0, &cfg, &Serial).unwrap();
        let b = harmonic_measure_with(&m, 20.0, &cfg, &Rayon::new(3).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
