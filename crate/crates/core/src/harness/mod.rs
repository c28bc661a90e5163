//! Scenario configuration, deterministic session execution,
//! device-characterization sweeps, and structured report output.

mod calibrate;
mod characterize;
mod config;
mod report;
mod session;
mod sweep;

pub use calibrate::{calibrate_misalignment, CalibrationResult};
pub use characterize::{run_characterization, CharacterizationSweep, Curve, DeviceKind};
pub use config::{
    CarverKind, ConfigError, MuMode, PatternKind, ScenarioConfig, DEMO_MISALIGNMENT_RAD,
};
pub use report::{
    curve_csv, emit_report, events_csv, histogram_csv, metrics_lines, sifted_csv,
    write_report_files, ReportFormat,
};
pub use session::{intensity_statistics, run_session, IntensityStats, SessionReport};
pub use sweep::{sweep_scenarios, SweepPoint};

use thiserror::Error;

use crate::devices::DeviceError;
use crate::link::LinkError;
use crate::protocol::ProtocolError;

/// Harness-level errors; module errors carry the pipeline stage that
/// raised them.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("stage `{stage}`: {source}")]
    Device {
        stage: &'static str,
        source: DeviceError,
    },
    #[error("stage `{stage}`: {source}")]
    Link {
        stage: &'static str,
        source: LinkError,
    },
    #[error("stage `{stage}`: {source}")]
    Protocol {
        stage: &'static str,
        source: ProtocolError,
    },
    #[error("device `{device}` has no sweep axis `{axis}`")]
    UnknownAxis { device: &'static str, axis: String },
    #[error("not enough statistics: {0}")]
    InsufficientStatistics(&'static str),
}
