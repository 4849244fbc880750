use crate::error::{Error, Result};

/// Runs `f` on a dedicated rayon pool with exactly `threads` workers.
/// Everything computed inside is independent of the worker count.
pub fn with_threads<R, F>(threads: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    if threads == 0 {
        return Err(Error::InvalidParameter("thread cap must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn available_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
