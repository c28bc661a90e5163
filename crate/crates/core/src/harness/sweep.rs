//! Scenario sweeps: independent sessions over values of one numeric
//! configuration key.
//!
//! Each point runs with a seed derived from the master seed and the
//! point's value, so permuting the sweep order cannot change any
//! individual session's result.

use super::{run_session, HarnessError, ScenarioConfig, SessionReport};
use crate::seed::{derive, STREAM_SWEEP};

/// One executed sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    /// Effective configuration of the point (key set, seed derived).
    pub config: ScenarioConfig,
    pub report: SessionReport,
}

/// Runs one session per value of `key`.
pub fn sweep_scenarios(
    base: &ScenarioConfig,
    key: &str,
    values: &[f64],
) -> Result<Vec<SweepPoint>, HarnessError> {
    values
        .iter()
        .map(|&value| {
            let mut cfg = base.clone();
            cfg.set_numeric_key(key, value)?;
            cfg.seed = derive(base.seed, STREAM_SWEEP, value.to_bits());
            cfg.validate()?;
            let report = run_session(&cfg)?;
            Ok(SweepPoint {
                value,
                config: cfg,
                report,
            })
        })
        .collect()
}
