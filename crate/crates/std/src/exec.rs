use gcalc_core::Executor;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const THREADS_ENV: &str = "G_CALC_THREADS";

/// Order-preserving parallel map on a dedicated rayon pool.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    pub fn new(threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::Threads("worker count must be positive".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Threads(e.to_string()))?;
        Ok(Self { pool })
    }

    /// Worker count from `G_CALC_THREADS`, else the available parallelism.
    pub fn from_env() -> Result<Self> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(v) => parse_threads(&v)?,
            Err(std::env::VarError::NotPresent) => {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            }
            Err(e) => return Err(Error::Threads(e.to_string())),
        };
        Self::new(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

fn parse_threads(v: &str) -> Result<usize> {
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::Threads(format!("not a positive worker count: {v:?}"))),
    }
}

impl Executor for RayonExecutor {
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

    #[test]
    fn preserves_order() {
        let ex = RayonExecutor::new(4).unwrap();
        assert_eq!(ex.map(1000, |i| i * i), (0..1000).map(|i| i * i).collect::<Vec<_>>());
        assert!(RayonExecutor::new(0).is_err());
    }

    #[test]
    fn thread_counts() {
        assert_eq!(parse_threads(" 3 ").unwrap(), 3);
        for bad in ["0", "zero", "-1", ""] {
            assert!(parse_threads(bad).is_err(), "{bad}");
        }
    }
}
