use crate::error::{CliError, CliResult};

pub const THREADS_VAR: &str = "SVCP_THREADS";

/// Worker pool capped by `SVCP_THREADS`; unset or `0` lets rayon decide.
pub fn pool() -> CliResult<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("{THREADS_VAR} must be a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Data(format!("thread pool: {e}")))
}
