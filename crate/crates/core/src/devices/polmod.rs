//! Polarization modulator: a balanced MZI feeding a polarization
//! rotator-combiner.
//!
//! The MZI sets the amplitude split between the TE and TM arms (angle θ)
//! and the phase section sets their relative phase δ, producing
//! `(cos θ, e^{iδ}·sin θ)`. Two imperfections are modeled: a finite
//! polarization extinction floor (coherent leakage into the orthogonal
//! state) and a polarization-dependent loss on the TM component.

use num_complex::Complex64;

use crate::optics::{db_to_linear, JonesVector, PolarizationState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolModParams {
    /// MZI amplitude-split angle currently driven, radians.
    pub theta: f64,
    /// TE/TM relative phase currently driven, radians.
    pub delta: f64,
    /// Differential TE/TM loss, dB (positive magnitude).
    pub pdl_db: f64,
    /// Best achievable polarization extinction ratio, dB
    /// (`f64::INFINITY` for an ideal modulator).
    pub per_floor_db: f64,
}

impl PolModParams {
    /// Measured chip values: PER floor 30 dB, 0.9 dB four-state power
    /// variation (reproduced by an equal PDL).
    pub fn chip_default() -> Self {
        Self {
            theta: 0.0,
            delta: 0.0,
            pdl_db: 0.9,
            per_floor_db: 30.0,
        }
    }

    /// No leakage, no PDL.
    pub fn ideal() -> Self {
        Self {
            theta: 0.0,
            delta: 0.0,
            pdl_db: 0.0,
            per_floor_db: f64::INFINITY,
        }
    }

    /// Drive angles that prepare each BB84 state.
    pub fn drive_angles(target: PolarizationState) -> (f64, f64) {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
        match target {
            PolarizationState::H => (0.0, 0.0),
            PolarizationState::V => (FRAC_PI_2, 0.0),
            PolarizationState::D => (FRAC_PI_4, 0.0),
            PolarizationState::A => (FRAC_PI_4, PI),
        }
    }

    /// Emitted Jones vector for a target state, with leakage floor and
    /// PDL applied. The squared norm is the state's relative
    /// transmission (1 for an ideal modulator).
    pub fn output(&self, target: PolarizationState) -> JonesVector {
        let (theta, delta) = Self::drive_angles(target);
        self.emit(theta, delta)
    }

    /// Emitted Jones vector at the currently driven (θ, δ); used by
    /// characterization sweeps.
    pub fn output_for_drive(&self) -> JonesVector {
        self.emit(self.theta, self.delta)
    }

    fn emit(&self, theta: f64, delta: f64) -> JonesVector {
        let (s, c) = theta.sin_cos();
        let phase = Complex64::from_polar(1.0, delta);
        let ideal = JonesVector::new(Complex64::new(c, 0.0), phase * s);
        // Orthogonal complement of the ideal state.
        let ortho = JonesVector::new(-phase.conj() * s, Complex64::new(c, 0.0));
        // Leakage fraction chosen so the emitted power ratio
        // intended/orthogonal equals the PER floor exactly.
        let leak_lin = db_to_linear(-self.per_floor_db);
        let eps = leak_lin / (1.0 + leak_lin);
        let (a, b) = ((1.0 - eps).sqrt(), eps.sqrt());
        let mut out =
            JonesVector::new(a * ideal.e_h + b * ortho.e_h, a * ideal.e_v + b * ortho.e_v);
        // PDL acts on the TM (vertical) field amplitude.
        out.e_v *= db_to_linear(-self.pdl_db / 2.0);
        out
    }

    /// Measured polarization extinction ratio of one emitted state, dB:
    /// power on the intended analyzer over power on its orthogonal
    /// partner.
    pub fn per_db(&self, target: PolarizationState) -> f64 {
        let out = self.output(target);
        let intended = target.jones().inner(&out).norm_sqr();
        let orthogonal = orthogonal_of(target).jones().inner(&out).norm_sqr();
        10.0 * (intended / orthogonal).log10()
    }

    /// Max − min emitted power over the four states, in dB. Zero when
    /// `pdl_db` is zero.
    pub fn power_variation_db(&self) -> f64 {
        let powers: Vec<f64> = PolarizationState::ALL
            .iter()
            .map(|&s| self.output(s).power())
            .collect();
        let max = powers.iter().cloned().fold(f64::MIN, f64::max);
        let min = powers.iter().cloned().fold(f64::MAX, f64::min);
        10.0 * (max / min).log10()
    }
}

/// The same-basis orthogonal partner of a state.
pub fn orthogonal_of(s: PolarizationState) -> PolarizationState {
    match s {
        PolarizationState::H => PolarizationState::V,
        PolarizationState::V => PolarizationState::H,
        PolarizationState::D => PolarizationState::A,
        PolarizationState::A => PolarizationState::D,
    }
}
