//! Batch front end: a TOML configuration selects the suites, every check
//! becomes a report row, and the rows are written as JSON or CSV.

pub mod config;
pub mod report;
pub mod suites;

use config::{Model, RunConfig};
use report::Report;

/// Invalid configuration or environment; maps to exit status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

/// Runs the suites of `command` and collects their rows.
pub fn run(command: &str, cfg: RunConfig, models: &[Model]) -> Report {
    let rows = match command {
        "eta" => suites::eta(&cfg, models),
        "index" => suites::index(&cfg),
        "modn" => suites::modn(&cfg),
        "fractional" => suites::fractional(&cfg),
        _ => {
            let mut rows = suites::eta(&cfg, models);
            rows.extend(suites::index(&cfg));
            rows.extend(suites::modn(&cfg));
            rows.extend(suites::fractional(&cfg));
            rows
        }
    };
    Report::new(command, cfg, rows)
}

/// Caps the global rayon pool. A no-op without the `parallel` feature.
pub fn cap_threads(n: usize) -> Result<(), ConfigError> {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| ConfigError(format!("thread pool: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}
