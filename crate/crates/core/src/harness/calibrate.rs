//! QBER calibration: bisects the receiver misalignment until a session
//! at the configured seed measures the target QBER.
//!
//! The measured composite QBER bundles dark counts, finite extinction,
//! and misalignment; only the misalignment is free, so this pins the one
//! knob the other parameters do not determine.

use super::{run_session, HarnessError, ScenarioConfig, SessionReport};

#[derive(Debug, Clone)]
pub struct CalibrationResult {
    pub misalignment_rad: f64,
    pub achieved_qber: f64,
    pub report: SessionReport,
}

/// Finds the misalignment angle whose session QBER matches
/// `target_qber` within `tolerance` (absolute), searching [0, 0.5] rad.
pub fn calibrate_misalignment(
    cfg: &ScenarioConfig,
    target_qber: f64,
    tolerance: f64,
) -> Result<CalibrationResult, HarnessError> {
    let qber_at = |angle: f64| -> Result<(f64, SessionReport), HarnessError> {
        let mut c = cfg.clone();
        c.receiver.misalignment_rad = angle;
        let report = run_session(&c)?;
        let q = report
            .stats
            .qber
            .ok_or(HarnessError::InsufficientStatistics(
                "no sifted bits; cannot calibrate QBER",
            ))?;
        Ok((q, report))
    };
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    let (q_lo, report_lo) = qber_at(lo)?;
    if q_lo >= target_qber {
        // The floor (darks + finite extinction) already exceeds the target.
        return Ok(CalibrationResult {
            misalignment_rad: lo,
            achieved_qber: q_lo,
            report: report_lo,
        });
    }
    let mut best = (lo, q_lo, report_lo);
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        let (q, report) = qber_at(mid)?;
        if (q - target_qber).abs() < (best.1 - target_qber).abs() {
            best = (mid, q, report);
        }
        if (q - target_qber).abs() <= tolerance {
            break;
        }
        if q < target_qber {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CalibrationResult {
        misalignment_rad: best.0,
        achieved_qber: best.1,
        report: best.2,
    })
}
