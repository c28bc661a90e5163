//! Single-photon avalanche detectors with dead time and dark counts.
//!
//! A [`DetectorBank`] owns the mutable per-detector state: the time of
//! the last accepted click and the scheduled arrival of the next dark
//! count. Dark counts are independent Poisson processes (one derived RNG
//! stream per detector); candidate clicks — dark or optical — are
//! discarded while their detector is dead, without retriggering it.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::{DetectorProbs, LinkError};
use crate::optics::PolarizationState;
use crate::seed::{stream_rng, STREAM_DARK};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpadParams {
    /// Detection efficiency in [0, 1].
    pub efficiency: f64,
    /// Dead time after an accepted click, µs.
    pub dead_time_us: f64,
    /// Free-running dark count rate, counts/s.
    pub dark_counts_per_s: f64,
}

impl SpadParams {
    /// Demo detectors: 20% efficiency, 15 µs dead time. The dark rate is
    /// not a measured chip figure; 500/s is a typical gated InGaAs value
    /// and is configurable.
    pub fn chip_default() -> Self {
        Self {
            efficiency: 0.2,
            dead_time_us: 15.0,
            dark_counts_per_s: 500.0,
        }
    }
}

/// One detector click.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionEvent {
    pub detector: PolarizationState,
    /// Absolute timestamp, ns.
    pub time_ns: f64,
    /// Index of the originating pulse; `None` for dark counts.
    pub pulse_index: Option<u64>,
}

/// Four detectors with dead-time registers and dark-count schedulers.
#[derive(Debug, Clone)]
pub struct DetectorBank {
    params: [SpadParams; 4],
    last_click_ns: [f64; 4],
    next_dark_ns: [f64; 4],
    dark_rng: [ChaCha12Rng; 4],
    clock_ns: f64,
}

impl DetectorBank {
    /// Builds a bank starting at `start_ns`; dark processes draw from
    /// per-detector streams derived from `master_seed`.
    pub fn new(params: [SpadParams; 4], master_seed: u64, start_ns: f64) -> Self {
        let mut dark_rng = [
            stream_rng(master_seed, STREAM_DARK, 0),
            stream_rng(master_seed, STREAM_DARK, 1),
            stream_rng(master_seed, STREAM_DARK, 2),
            stream_rng(master_seed, STREAM_DARK, 3),
        ];
        let mut next_dark_ns = [f64::INFINITY; 4];
        for i in 0..4 {
            next_dark_ns[i] =
                start_ns + exponential_gap_ns(params[i].dark_counts_per_s, &mut dark_rng[i]);
        }
        Self {
            params,
            last_click_ns: [f64::NEG_INFINITY; 4],
            next_dark_ns,
            dark_rng,
            clock_ns: start_ns,
        }
    }

    /// Identical detectors.
    pub fn uniform(params: SpadParams, master_seed: u64, start_ns: f64) -> Self {
        Self::new([params; 4], master_seed, start_ns)
    }

    pub fn params(&self, d: PolarizationState) -> &SpadParams {
        &self.params[d.index()]
    }

    /// Advances the bank to `t_ns`, emitting any dark counts that fire
    /// before it, then draws one Bernoulli per detector for the pulse.
    ///
    /// Pulses must arrive in nondecreasing time order.
    pub fn detect<R: Rng + ?Sized>(
        &mut self,
        probs: &DetectorProbs,
        t_ns: f64,
        pulse_index: u64,
        rng: &mut R,
        out: &mut Vec<DetectionEvent>,
    ) -> Result<(), LinkError> {
        if t_ns < self.clock_ns {
            return Err(LinkError::OutOfOrderPulses {
                prev_ns: self.clock_ns,
                t_ns,
            });
        }
        self.emit_darks_until(t_ns, out);
        self.clock_ns = t_ns;
        for detector in PolarizationState::ALL {
            let i = detector.index();
            let p = probs.0[i];
            // Always draw, so the RNG stream does not depend on the
            // probability values.
            let fired = rng.random::<f64>() < p;
            if fired && self.accept(i, t_ns) {
                out.push(DetectionEvent {
                    detector,
                    time_ns: t_ns,
                    pulse_index: Some(pulse_index),
                });
            }
        }
        Ok(())
    }

    /// Emits remaining dark counts up to `until_ns` and advances the
    /// clock (use at the end of a session or across burst gaps).
    pub fn flush_darks(&mut self, until_ns: f64, out: &mut Vec<DetectionEvent>) {
        self.emit_darks_until(until_ns, out);
        self.clock_ns = self.clock_ns.max(until_ns);
    }

    fn emit_darks_until(&mut self, t_ns: f64, out: &mut Vec<DetectionEvent>) {
        for detector in PolarizationState::ALL {
            let i = detector.index();
            while self.next_dark_ns[i] < t_ns {
                let t = self.next_dark_ns[i];
                if self.accept(i, t) {
                    out.push(DetectionEvent {
                        detector,
                        time_ns: t,
                        pulse_index: None,
                    });
                }
                let gap =
                    exponential_gap_ns(self.params[i].dark_counts_per_s, &mut self.dark_rng[i]);
                self.next_dark_ns[i] = t + gap;
            }
        }
    }

    /// Dead-time gate: a candidate within the dead time of the last
    /// accepted click is discarded and does not retrigger the detector.
    fn accept(&mut self, i: usize, t_ns: f64) -> bool {
        let dead_ns = self.params[i].dead_time_us * 1e3;
        if t_ns - self.last_click_ns[i] >= dead_ns {
            self.last_click_ns[i] = t_ns;
            true
        } else {
            false
        }
    }
}

/// Exponential inter-arrival gap of a Poisson process, in ns.
fn exponential_gap_ns<R: Rng + ?Sized>(rate_per_s: f64, rng: &mut R) -> f64 {
    if rate_per_s <= 0.0 {
        return f64::INFINITY;
    }
    let u: f64 = rng.random();
    // (1 - u) ∈ (0, 1], so the log is finite.
    -(1.0 - u).ln() / rate_per_s * 1e9
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn saturating_probs() -> DetectorProbs {
        DetectorProbs([1.0, 0.0, 0.0, 0.0])
    }

    fn dark_free(dead_time_us: f64) -> SpadParams {
        SpadParams {
            efficiency: 1.0,
            dead_time_us,
            dark_counts_per_s: 0.0,
        }
    }

    #[test]
    fn dead_time_gates_close_pulses() {
        let mut bank = DetectorBank::uniform(dark_free(15.0), 1, 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mut out = Vec::new();
        bank.detect(&saturating_probs(), 0.0, 0, &mut rng, &mut out)
            .unwrap();
        bank.detect(&saturating_probs(), 1_000.0, 1, &mut rng, &mut out)
            .unwrap();
        assert_eq!(out.len(), 1, "second pulse 1 µs later must be discarded");
    }

    #[test]
    fn pulses_past_dead_time_both_click() {
        let mut bank = DetectorBank::uniform(dark_free(15.0), 1, 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mut out = Vec::new();
        bank.detect(&saturating_probs(), 0.0, 0, &mut rng, &mut out)
            .unwrap();
        bank.detect(&saturating_probs(), 20_000.0, 1, &mut rng, &mut out)
            .unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn separation_equal_to_dead_time_is_accepted() {
        let mut bank = DetectorBank::uniform(dark_free(15.0), 1, 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mut out = Vec::new();
        bank.detect(&saturating_probs(), 0.0, 0, &mut rng, &mut out)
            .unwrap();
        bank.detect(&saturating_probs(), 15_000.0, 1, &mut rng, &mut out)
            .unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn out_of_order_pulses_rejected() {
        let mut bank = DetectorBank::uniform(dark_free(15.0), 1, 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mut out = Vec::new();
        bank.detect(&saturating_probs(), 100.0, 0, &mut rng, &mut out)
            .unwrap();
        let err = bank.detect(&saturating_probs(), 50.0, 1, &mut rng, &mut out);
        assert!(matches!(err, Err(LinkError::OutOfOrderPulses { .. })));
    }

    #[test]
    fn saturated_rate_is_dead_time_limited() {
        // Saturating pulses every 1 µs for 1 s against a 15 µs dead time:
        // throughput must pin at 1/15 µs = 66.7 kcps.
        let mut bank = DetectorBank::uniform(dark_free(15.0), 1, 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let mut out = Vec::new();
        let n = 1_000_000u64;
        for k in 0..n {
            bank.detect(
                &saturating_probs(),
                k as f64 * 1_000.0,
                k,
                &mut rng,
                &mut out,
            )
            .unwrap();
        }
        let rate = out.len() as f64 / 1.0;
        assert!(
            (rate - 66_666.7).abs() / 66_666.7 < 0.01,
            "saturated rate {rate} cps"
        );
    }

    #[test]
    fn same_detector_interarrivals_respect_dead_time() {
        let params = SpadParams {
            efficiency: 1.0,
            dead_time_us: 3.0,
            dark_counts_per_s: 50_000.0,
        };
        let mut bank = DetectorBank::uniform(params, 5, 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let mut out = Vec::new();
        let probs = DetectorProbs([0.3, 0.3, 0.3, 0.3]);
        for k in 0..200_000u64 {
            bank.detect(&probs, k as f64 * 100.0, k, &mut rng, &mut out)
                .unwrap();
        }
        bank.flush_darks(2.1e7, &mut out);
        let mut last = [f64::NEG_INFINITY; 4];
        for e in &out {
            let i = e.detector.index();
            assert!(
                e.time_ns > last[i],
                "times strictly increasing per detector"
            );
            assert!(
                e.time_ns - last[i] >= 3.0 * 1e3 - 1e-9 || last[i] == f64::NEG_INFINITY,
                "dead-time violation: {} after {}",
                e.time_ns,
                last[i]
            );
            last[i] = e.time_ns;
        }
    }

    #[test]
    fn dark_rate_reproduces_configuration() {
        let params = SpadParams {
            efficiency: 1.0,
            dead_time_us: 0.0,
            dark_counts_per_s: 500.0,
        };
        let mut bank = DetectorBank::uniform(params, 77, 0.0);
        let mut out = Vec::new();
        bank.flush_darks(10e9, &mut out); // 10 s
        let per_detector = out.len() as f64 / 4.0 / 10.0;
        assert!(
            (per_detector - 500.0).abs() < 15.0,
            "dark rate {per_detector}/s"
        );
        assert!(out.iter().all(|e| e.pulse_index.is_none()));
    }

    #[test]
    fn dark_streams_are_deterministic() {
        let params = SpadParams {
            efficiency: 1.0,
            dead_time_us: 1.0,
            dark_counts_per_s: 10_000.0,
        };
        let mut a = Vec::new();
        DetectorBank::uniform(params, 3, 0.0).flush_darks(1e8, &mut a);
        let mut b = Vec::new();
        DetectorBank::uniform(params, 3, 0.0).flush_darks(1e8, &mut b);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.time_ns.to_bits(), y.time_ns.to_bits());
            assert_eq!(x.detector, y.detector);
        }
    }
}
