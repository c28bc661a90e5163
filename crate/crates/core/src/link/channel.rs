//! Fiber channel: lumped loss plus a seed-derived unitary polarization
//! rotation.
//!
//! Standard single-mode fiber scrambles the absolute polarization frame
//! but preserves the relations between states, so the channel is one
//! fixed SU(2) rotation per session.

use rand::Rng;

use crate::devices::OpticalPulse;
use crate::optics::JonesMatrix;
use crate::seed::{stream_rng, STREAM_CHANNEL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Total link loss including Bob's optics, dB (positive magnitude).
    pub loss_db: f64,
    /// Unitary polarization rotation of the fiber.
    pub rotation: JonesMatrix,
    /// Fiber length, km (metadata only).
    pub length_km: f64,
}

/// Draws the channel rotation for a seed: a random rotation angle and two
/// random phases, uniform on their ranges.
pub fn make_channel(seed: u64, loss_db: f64, length_km: f64) -> ChannelParams {
    let mut rng = stream_rng(seed, STREAM_CHANNEL, 0);
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let phi_a = rng.random_range(0.0..std::f64::consts::TAU);
    let phi_b = rng.random_range(0.0..std::f64::consts::TAU);
    ChannelParams {
        loss_db,
        rotation: JonesMatrix::rotation_unitary(theta, phi_a, phi_b),
        length_km,
    }
}

/// Propagates a pulse through the channel.
///
/// Loss acts on the mean photon number (including the pulse's
/// polarization-path transmission, which the emitted Jones vector carried
/// as excess power); the Jones vector is rotated and re-normalized.
pub fn channel_apply(c: &ChannelParams, p: &OpticalPulse) -> OpticalPulse {
    let mu = p.mu.scaled(p.jones.power()).attenuated(c.loss_db);
    OpticalPulse {
        mu,
        jones: c.rotation.apply(&p.jones).normalized(),
        ..*p
    }
}
