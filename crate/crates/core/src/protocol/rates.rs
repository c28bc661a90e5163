//! Binary entropy, the Shor-Preskill secret fraction, and the
//! asymptotic no-decoy GLLP key-rate bound for weak coherent pulses.

use super::ProtocolError;
use crate::optics::{multi_photon_probability, MeanPhotonNumber};

/// Binary entropy `H₂(p) = −p·log₂p − (1−p)·log₂(1−p)`.
pub fn binary_entropy(p: f64) -> Result<f64, ProtocolError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ProtocolError::OutOfDomain {
            name: "p",
            value: p,
            domain: "[0, 1]",
        });
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

/// Shor-Preskill secret fraction `1 − 2·H₂(e)` for a perfect
/// single-photon source; negative when no key is distillable.
pub fn shor_preskill_fraction(e: f64) -> Result<f64, ProtocolError> {
    if !(0.0..=0.5).contains(&e) {
        return Err(ProtocolError::OutOfDomain {
            name: "e",
            value: e,
            domain: "[0, 0.5]",
        });
    }
    Ok(1.0 - 2.0 * binary_entropy(e)?)
}

/// QBER at which the Shor-Preskill fraction crosses zero (≈ 11%),
/// located by bisection to 1e-6.
pub fn shor_preskill_threshold() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if shor_preskill_fraction(mid).unwrap() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Asymptotic secret bits per emitted pulse for a weak coherent source
/// without decoy states (GLLP, worst-case multi-photon tagging):
///
/// ```text
/// Ω = 1 − p_multi(µ)/Q_µ
/// R = q·Q_µ·( −f·H₂(E_µ) + Ω·(1 − H₂(E_µ/Ω)) )
/// ```
///
/// `q_mu` is the gain (detections per pulse), `e_mu` the sifted QBER,
/// `q` the sifting factor, and `f ≥ 1` the error-correction
/// inefficiency. Ω is clamped to [0, 1] and the phase error `E_µ/Ω` to
/// ≤ 1/2; a multi-photon-dominated gain (Ω ≤ 0) or a negative bound
/// returns 0 — no key.
pub fn gllp_rate_no_decoy(q_mu: f64, e_mu: f64, mu: MeanPhotonNumber, q: f64, f: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&q_mu));
    debug_assert!((0.0..=0.5).contains(&e_mu));
    debug_assert!((0.0..=1.0).contains(&q));
    debug_assert!(f >= 1.0);
    if q_mu <= 0.0 {
        return 0.0;
    }
    let omega = (1.0 - multi_photon_probability(mu) / q_mu).clamp(0.0, 1.0);
    if omega <= 0.0 {
        return 0.0;
    }
    let phase_error = (e_mu / omega).min(0.5);
    let h_bit = binary_entropy(e_mu).expect("e_mu validated");
    let h_phase = binary_entropy(phase_error).expect("clamped to [0, 0.5]");
    let rate = q * q_mu * (-f * h_bit + omega * (1.0 - h_phase));
    rate.max(0.0)
}

/// Counters and derived rates of one BB84 session.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionStats {
    pub pulses_emitted: u64,
    /// All accepted detector clicks, including unattributed dark counts.
    pub detections: u64,
    pub sifted_bits: u64,
    pub errors: u64,
    /// `errors / sifted_bits`; `None` when nothing was sifted.
    pub qber: Option<f64>,
    /// Detections per second of wall time (pre-sift).
    pub raw_rate_bps: f64,
    pub sifted_rate_bps: f64,
    /// `gllp_rate_no_decoy` × effective pulse rate.
    pub secret_rate_bps: f64,
    /// Mean photon number of emitted signal pulses.
    pub mu_effective: f64,
}

impl SessionStats {
    /// Derives the rates from raw counters.
    ///
    /// `duration_s` is the session wall time (bursts / burst clock);
    /// `effective_pulse_rate_hz` converts the per-pulse secret fraction
    /// into a rate. The secret rate is zero while the QBER is undefined
    /// or beyond 1/2.
    #[allow(clippy::too_many_arguments)]
    pub fn compute(
        pulses_emitted: u64,
        detections: u64,
        sifted_bits: u64,
        errors: u64,
        mu_effective: f64,
        duration_s: f64,
        effective_pulse_rate_hz: f64,
        q: f64,
        f: f64,
    ) -> Self {
        let qber = if sifted_bits > 0 {
            Some(errors as f64 / sifted_bits as f64)
        } else {
            None
        };
        let q_mu = if pulses_emitted > 0 {
            detections as f64 / pulses_emitted as f64
        } else {
            0.0
        };
        let secret_per_pulse = match qber {
            Some(e) if e <= 0.5 => {
                gllp_rate_no_decoy(q_mu.min(1.0), e, MeanPhotonNumber::new(mu_effective), q, f)
            }
            _ => 0.0,
        };
        Self {
            pulses_emitted,
            detections,
            sifted_bits,
            errors,
            qber,
            raw_rate_bps: detections as f64 / duration_s,
            sifted_rate_bps: sifted_bits as f64 / duration_s,
            secret_rate_bps: secret_per_pulse * effective_pulse_rate_hz,
            mu_effective,
        }
    }
}
