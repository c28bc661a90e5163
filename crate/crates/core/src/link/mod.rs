//! Everything between Alice's chip output and Bob's time-tagged clicks:
//! fiber channel with polarization rotation, passive-basis receiver
//! optics, SPAD detectors with dead time and dark counts, and time-bin
//! histograms.

mod channel;
mod histogram;
mod receiver;
mod spad;

pub use channel::{channel_apply, make_channel, ChannelParams};
pub use histogram::{tia_histogram, Histogram, HistogramOrigin};
pub use receiver::{click_probabilities, set_compensation, DetectorProbs, ReceiverParams};
pub use spad::{DetectionEvent, DetectorBank, SpadParams};

use thiserror::Error;

/// Errors raised by the link layer.
#[derive(Debug, Error, PartialEq)]
pub enum LinkError {
    /// Pulses must be presented to the detector bank in time order.
    #[error("pulse at {t_ns} ns precedes already-processed time {prev_ns} ns")]
    OutOfOrderPulses { prev_ns: f64, t_ns: f64 },
}
