//! Parallel sweeps with a fixed reduction order.
//!
//! Tasks run on the rayon pool; results come back in input order and are reduced
//! sequentially, so totals are bit-identical for any worker count.

use crate::error::{Error, Result};
use crate::scalar::compensated_sum;
use crate::Cplx;
use rayon::prelude::*;

/// Maps `f` over `items` in parallel, returning results in input order.
pub fn ordered_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Like [`ordered_map`] but stops at the first error (by input position).
pub fn try_ordered_map<T, R, F>(items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    let out: Vec<Result<R>> = items.par_iter().map(f).collect();
    out.into_iter().collect()
}

/// Compensated sum in the given order.
pub fn ordered_sum(values: &[Cplx]) -> Cplx {
    compensated_sum(values.iter().copied())
}

/// Runs `f` on a dedicated pool with `workers` threads (`None` = available parallelism).
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::InvalidArgument("worker count must be positive".into()));
        }
        b = b.num_threads(w);
    }
    let pool = b.build().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(pool.install(f))
}
