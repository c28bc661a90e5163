//! All-pass microring modulator model.
//!
//! The ring is described by its free spectral range, loaded Q, and the
//! on-resonance transmission floor set by how close the coupler sits to
//! critical coupling. A PIN diode inside the cavity shifts the round-trip
//! phase; its voltage-to-phase slope is a single phenomenological
//! parameter calibrated against the measured static extinction ratio.

use crate::optics::db_to_linear;

/// Speed of light in m/s.
const C_M_PER_S: f64 = 299_792_458.0;

/// Calibrated microring parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingParams {
    /// Free spectral range in nm.
    pub fsr_nm: f64,
    /// Loaded quality factor.
    pub q_loaded: f64,
    /// Resonance wavelength the model is referenced to, in nm.
    pub center_wavelength_nm: f64,
    /// On-resonance transmission floor in dB (≤ −20 for a usable modulator).
    pub floor_db: f64,
    /// PIN diode drive slope: volts for one full 2π round-trip phase.
    pub volts_per_fsr: f64,
    /// Off-resonance insertion loss in dB (positive magnitude).
    pub insertion_loss_db: f64,
}

impl RingParams {
    /// Measured chip values: 0.65 nm FSR, Q = 9.5e5, −27 dB floor, and a
    /// drive slope calibrated so 50 mV yields a 25.6 dB static extinction.
    pub fn chip_default() -> Self {
        let base = Self {
            fsr_nm: 0.65,
            q_loaded: 9.5e5,
            center_wavelength_nm: 1550.0,
            floor_db: -27.0,
            volts_per_fsr: f64::INFINITY,
            insertion_loss_db: 0.0,
        };
        base.with_calibrated_drive(25.6, 0.05)
    }

    /// Round-trip amplitude `a` and self-coupling `t` of the all-pass
    /// model. `a·t` is fixed by the loaded Q (resonance linewidth
    /// `λ/Q`), and `t` is offset from critical coupling `t = a` just far
    /// enough that the on-resonance transmission equals `floor_db`.
    fn coupling(&self) -> (f64, f64) {
        // Phase full-width of the resonance: 2π·Δλ/FSR with Δλ = λ/Q.
        let w = std::f64::consts::TAU * self.center_wavelength_nm / (self.q_loaded * self.fsr_nm);
        // Solve 2(1−x)/√x = w for x = a·t (Lorentzian linewidth of the
        // all-pass resonance near critical coupling).
        let s = (-w / 2.0 + (w * w / 4.0 + 4.0).sqrt()) / 2.0;
        let a = s;
        let sqrt_floor = db_to_linear(self.floor_db / 2.0);
        let t = (a - sqrt_floor) / (1.0 - a * sqrt_floor);
        (a, t)
    }

    /// Power transmission at `detune_nm` from resonance with `volts`
    /// applied to the intracavity diode.
    ///
    /// All-pass response `|t − a·e^{iφ}|² / |1 − t·a·e^{iφ}|²` with
    /// round-trip phase `φ = 2π·detune/FSR + 2π·volts/volts_per_fsr`,
    /// clamped below at the floor and scaled by the insertion loss.
    pub fn transmission(&self, detune_nm: f64, volts: f64) -> f64 {
        let (a, t) = self.coupling();
        let phi = std::f64::consts::TAU * (detune_nm / self.fsr_nm + volts / self.volts_per_fsr);
        let cos_phi = phi.cos();
        let num = a * a - 2.0 * a * t * cos_phi + t * t;
        let den = 1.0 - 2.0 * a * t * cos_phi + (a * t) * (a * t);
        let floor = db_to_linear(self.floor_db);
        (num / den).clamp(floor, 1.0) * db_to_linear(-self.insertion_loss_db)
    }

    /// Transmission sampled over a sorted wavelength grid (absolute nm).
    pub fn spectrum(&self, wavelengths_nm: &[f64]) -> Vec<f64> {
        wavelengths_nm
            .iter()
            .map(|&w| self.transmission(w - self.center_wavelength_nm, 0.0))
            .collect()
    }

    /// Static extinction ratio in dB between `volts` applied and the
    /// on-resonance floor.
    pub fn static_er_db(&self, volts: f64) -> f64 {
        10.0 * (self.transmission(0.0, volts) / self.transmission(0.0, 0.0)).log10()
    }

    /// Fixes `volts_per_fsr` so that `static_er_db(volts) = er_db`.
    ///
    /// Bisects the drive phase on (0, π]; the transmission is monotone in
    /// phase on that interval.
    pub fn with_calibrated_drive(mut self, er_db: f64, volts: f64) -> Self {
        let (a, t) = self.coupling();
        let on_res = {
            let d = a - t;
            let e = 1.0 - a * t;
            (d * d) / (e * e)
        };
        let target = on_res * db_to_linear(er_db);
        let trans = |phi: f64| {
            let c = phi.cos();
            (a * a - 2.0 * a * t * c + t * t) / (1.0 - 2.0 * a * t * c + (a * t) * (a * t))
        };
        let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if trans(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let phi = 0.5 * (lo + hi);
        self.volts_per_fsr = volts * std::f64::consts::TAU / phi;
        self
    }

    /// Cavity photon lifetime `τ = Q·λ/(2π·c)` in ns.
    pub fn photon_lifetime_ns(&self) -> f64 {
        self.q_loaded * (self.center_wavelength_nm * 1e-9) / (std::f64::consts::TAU * C_M_PER_S)
            * 1e9
    }
}
