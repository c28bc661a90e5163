//! Foundation optics: decibel arithmetic, Jones calculus, the four BB84
//! polarization states, and Poisson photon-number statistics of weak
//! coherent pulses.
//!
//! All operations are pure; samplers take an explicit generator handle
//! owned by the caller.

mod db;
mod jones;
mod photon;

pub use db::{db_to_linear, linear_to_db};
pub use jones::{projection_probability, Basis, JonesMatrix, JonesVector, PolarizationState};
pub use photon::{
    attenuate, multi_photon_probability, poisson_pmf, poisson_sample, IntensityClass,
    MeanPhotonNumber,
};

use thiserror::Error;

/// Domain errors of the optics layer.
#[derive(Debug, Error, PartialEq)]
pub enum OpticsError {
    /// `linear_to_db` needs a strictly positive power ratio.
    #[error("cannot express ratio {0} in dB; ratio must be > 0")]
    NonPositiveRatio(f64),
    /// Projection probabilities are undefined for zero-power vectors.
    #[error("projection requires Jones vectors with nonzero power")]
    ZeroPowerVector,
}
