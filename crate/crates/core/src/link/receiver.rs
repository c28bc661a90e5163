//! Passive-basis receiver: tunable beam splitter, polarization
//! compensation, and two polarizing beam splitters feeding four
//! detectors.

use super::{ChannelParams, SpadParams};
use crate::devices::OpticalPulse;
use crate::optics::{db_to_linear, projection_probability, JonesMatrix, PolarizationState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverParams {
    /// Probability that a photon takes the rectilinear-basis path.
    pub tbs_split: f64,
    /// Extinction ratio of each PBS, dB (`f64::INFINITY` for ideal).
    pub pbs_extinction_db: f64,
    /// Polarization-controller setting applied before the beam splitters.
    pub compensation: JonesMatrix,
}

impl ReceiverParams {
    pub fn new(tbs_split: f64, pbs_extinction_db: f64) -> Self {
        Self {
            tbs_split,
            pbs_extinction_db,
            compensation: JonesMatrix::identity(),
        }
    }
}

/// Tunes the polarization controllers against the channel: the
/// compensation is the inverse (conjugate transpose) of the channel
/// rotation, optionally detuned by a residual misalignment angle.
pub fn set_compensation(
    r: &ReceiverParams,
    c: &ChannelParams,
    misalignment_rad: f64,
) -> ReceiverParams {
    let inverse = c.rotation.dagger();
    let compensation = if misalignment_rad == 0.0 {
        inverse
    } else {
        JonesMatrix::rotation(misalignment_rad).mul(&inverse)
    };
    ReceiverParams { compensation, ..*r }
}

/// Click probability of each detector for one arriving pulse.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DetectorProbs(pub [f64; 4]);

impl DetectorProbs {
    pub fn get(&self, d: PolarizationState) -> f64 {
        self.0[d.index()]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Detection probability per detector:
/// `path(basis) · projection(analyzer, compensated state) · (1 − e^(−µη))`,
/// with the projection folded against the PBS leakage.
pub fn click_probabilities(r: &ReceiverParams, p: &OpticalPulse, s: &SpadParams) -> DetectorProbs {
    let state = r.compensation.apply(&p.jones).normalized();
    let conversion = 1.0 - (-p.mu.get() * s.efficiency).exp();
    let leak = db_to_linear(-r.pbs_extinction_db);
    let mut probs = [0.0f64; 4];
    for detector in PolarizationState::ALL {
        let path = match detector.basis() {
            crate::optics::Basis::Rectilinear => r.tbs_split,
            crate::optics::Basis::Diagonal => 1.0 - r.tbs_split,
        };
        let proj = projection_probability(&detector.jones(), &state)
            .expect("analyzers and compensated states have unit power");
        let folded = proj * (1.0 - leak) + (1.0 - proj) * leak;
        probs[detector.index()] = path * folded * conversion;
    }
    DetectorProbs(probs)
}
