//! Library side of the `hzn` command-line tool: machine-readable reports,
//! deterministic seeded sampling, and the named check suites shared between
//! the binary and the acceptance tests.

pub mod report;
pub mod sampling;
pub mod suites;
pub mod table;

use hzn_core::SeriesConfig;

/// Series configuration from the environment: `HZN_TOL` overrides the
/// absolute tolerance, `HZN_MAX_TERMS` the term budget.
pub fn config_from_env() -> SeriesConfig {
    let mut cfg = SeriesConfig::default();
    if let Ok(v) = std::env::var("HZN_TOL") {
        if let Ok(tol) = v.parse::<f64>() {
            if tol > 0.0 {
                cfg.abs_tol = tol;
            }
        }
    }
    if let Ok(v) = std::env::var("HZN_MAX_TERMS") {
        if let Ok(mt) = v.parse::<u64>() {
            if mt >= 16 {
                cfg.max_terms = mt;
            }
        }
    }
    cfg
}
