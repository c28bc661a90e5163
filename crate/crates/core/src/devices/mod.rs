//! Physical models of the transmitter chip's four stages and the
//! transmitter assembly that emits pulse trains.
//!
//! The chain is: pulse-carving microring → intensity-modulating microring
//! (signal/decoy levels) → four-stage MZI variable optical attenuator →
//! MZI + polarization rotator-combiner polarization modulator. All device
//! models are immutable after construction; emission is a pure function
//! of (configuration, RNG stream).

mod polmod;
mod pulse;
mod ring;
mod transmitter;
mod voa;

pub use polmod::PolModParams;
pub use pulse::{Carver, PulseShapeParams};
pub use ring::RingParams;
pub use transmitter::{MuSource, OpticalPulse, PulseSpec, TimingConfig, Transmitter};
pub use voa::VoaParams;

use thiserror::Error;

/// Errors raised by device models.
#[derive(Debug, Error, PartialEq)]
pub enum DeviceError {
    /// MZI drive phases live on [0, π].
    #[error("MZI phase {0} rad outside [0, pi]")]
    PhaseOutOfRange(f64),
    /// Requested attenuation exceeds what the cascade can reach.
    #[error("attenuation target {target_db} dB outside reachable [0, {max_db}] dB")]
    UnreachableAttenuation { target_db: f64, max_db: f64 },
    /// A burst must fit inside one burst-clock period.
    #[error("burst of {burst_ns} ns does not fit in clock period {clock_period_ns} ns")]
    BurstTooLong { burst_ns: f64, clock_period_ns: f64 },
    /// Parameter failed a physical-validity check.
    #[error("invalid {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },
}
