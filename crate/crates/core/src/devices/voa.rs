//! Four-stage Mach-Zehnder variable optical attenuator.
//!
//! Each stage is a nominally balanced MZI with finite extinction; its
//! through-port transmission is `(1−ε)·cos²(φ/2) + ε` where ε is set by
//! the stage's maximum attenuation. Stage attenuations in dB add.

use super::DeviceError;
use crate::optics::db_to_linear;

/// Residual dB left unassigned by the solver before it reports failure.
const SOLVE_TOLERANCE_DB: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoaParams {
    /// Maximum attenuation of each MZI stage, dB (positive magnitudes).
    pub stage_max_attenuation_db: [f64; 4],
    /// Current differential phase of each stage, radians in [0, π].
    pub stage_phase: [f64; 4],
}

impl VoaParams {
    /// Measured stage maxima of the chip: 40.3, 44.0, 53.3, 46.4 dB.
    pub fn chip_default() -> Self {
        Self {
            stage_max_attenuation_db: [40.3, 44.0, 53.3, 46.4],
            stage_phase: [0.0; 4],
        }
    }

    /// Through-port transmission of one stage in dB (≤ 0), monotone
    /// decreasing in `phase` on [0, π].
    pub fn stage_transmission_db(max_attenuation_db: f64, phase: f64) -> Result<f64, DeviceError> {
        if !(0.0..=std::f64::consts::PI).contains(&phase) {
            return Err(DeviceError::PhaseOutOfRange(phase));
        }
        let eps = db_to_linear(-max_attenuation_db);
        let half = 0.5 * phase;
        let t = (1.0 - eps) * half.cos().powi(2) + eps;
        Ok(10.0 * t.log10())
    }

    /// Total attenuation of the cascade in dB (sum of stage values, ≤ 0).
    pub fn total_db(&self) -> f64 {
        self.stage_max_attenuation_db
            .iter()
            .zip(self.stage_phase.iter())
            .map(|(&m, &p)| Self::stage_transmission_db(m, p).expect("stored phases are validated"))
            .sum()
    }

    /// Maximum attenuation magnitude the cascade can reach, dB.
    pub fn max_total_db(&self) -> f64 {
        self.stage_max_attenuation_db.iter().sum()
    }

    /// Finds stage phases whose total attenuation is `target_db`
    /// (positive magnitude), within 0.01 dB.
    ///
    /// Stages are filled greedily to their maxima in order; the first
    /// stage that can absorb the remainder is set by bisection.
    pub fn solve(&self, target_db: f64) -> Result<[f64; 4], DeviceError> {
        let max = self.max_total_db();
        if !(0.0..=max).contains(&target_db) {
            return Err(DeviceError::UnreachableAttenuation {
                target_db,
                max_db: max,
            });
        }
        let mut phases = [0.0f64; 4];
        let mut remaining = target_db;
        for (i, &stage_max) in self.stage_max_attenuation_db.iter().enumerate() {
            if remaining <= 0.0 {
                break;
            }
            if remaining >= stage_max {
                phases[i] = std::f64::consts::PI;
                remaining -= stage_max;
            } else {
                // Bisection on the monotone stage response.
                let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    let att = -Self::stage_transmission_db(stage_max, mid).unwrap();
                    if att < remaining {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                phases[i] = 0.5 * (lo + hi);
                remaining = 0.0;
            }
        }
        if remaining > SOLVE_TOLERANCE_DB {
            return Err(DeviceError::UnreachableAttenuation {
                target_db,
                max_db: max,
            });
        }
        Ok(phases)
    }

    /// Returns a copy with phases solved for `target_db`.
    pub fn with_target(mut self, target_db: f64) -> Result<Self, DeviceError> {
        self.stage_phase = self.solve(target_db)?;
        Ok(self)
    }
}
