//! Transmitter assembly: burst timing plus the device chain that sets
//! each pulse's mean photon number and polarization.
//!
//! A pulse's `mu` is referenced to unit polarization-path transmission;
//! the per-state transmission of the polarization modulator rides in the
//! squared norm of its Jones vector, so the mean photon number leaving
//! Alice is `mu · power(jones)`.

use rand::Rng;

use super::{Carver, DeviceError, PolModParams, PulseShapeParams, VoaParams};
use crate::optics::{IntensityClass, JonesVector, MeanPhotonNumber, PolarizationState};

/// Burst and repetition timing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingConfig {
    /// Optical pulses per burst.
    pub pulses_per_burst: u32,
    /// Intra-burst repetition rate, Hz.
    pub rep_rate_hz: f64,
    /// Burst clock frequency, Hz.
    pub burst_clock_hz: f64,
}

impl TimingConfig {
    /// Demo timing: bursts of 1000 pulses at 10 MHz, 9.71 kHz clock.
    pub fn chip_default() -> Self {
        Self {
            pulses_per_burst: 1000,
            rep_rate_hz: 1.0e7,
            burst_clock_hz: 9.71e3,
        }
    }

    /// A burst must fit inside one burst-clock period.
    pub fn validate(&self) -> Result<(), DeviceError> {
        if self.pulses_per_burst == 0 || self.rep_rate_hz <= 0.0 || self.burst_clock_hz <= 0.0 {
            return Err(DeviceError::InvalidParam {
                name: "timing",
                reason: "pulse count and rates must be positive".into(),
            });
        }
        let burst_ns = self.pulses_per_burst as f64 * self.pulse_period_ns();
        if burst_ns > self.burst_period_ns() {
            return Err(DeviceError::BurstTooLong {
                burst_ns,
                clock_period_ns: self.burst_period_ns(),
            });
        }
        Ok(())
    }

    /// Pulses emitted per second of wall time, `pulses_per_burst × clock`.
    pub fn effective_pulse_rate_hz(&self) -> f64 {
        self.pulses_per_burst as f64 * self.burst_clock_hz
    }

    pub fn pulse_period_ns(&self) -> f64 {
        1e9 / self.rep_rate_hz
    }

    pub fn burst_period_ns(&self) -> f64 {
        1e9 / self.burst_clock_hz
    }

    pub fn burst_start_ns(&self, burst_index: u64) -> f64 {
        burst_index as f64 * self.burst_period_ns()
    }

    /// Nominal (jitter-free) emission time of pulse `i` in burst `b`.
    pub fn pulse_time_ns(&self, burst_index: u64, pulse_in_burst: u32) -> f64 {
        self.burst_start_ns(burst_index) + pulse_in_burst as f64 * self.pulse_period_ns()
    }
}

/// How the per-class mean photon number is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuSource {
    /// Set the mean photon number leaving Alice directly (averaged over
    /// the four prepared states).
    Direct { signal_mu: f64, decoy_mu: f64 },
    /// Derive it from the source flux through the device chain: VOA
    /// target plus lumped output losses (chip insertion + filters), with
    /// the decoy level expressed as a transmission ratio of the
    /// intensity modulator.
    DeviceChain {
        /// Photons per pulse entering the VOA.
        source_mu: f64,
        /// Requested VOA attenuation, dB.
        voa_target_db: f64,
        /// Lumped loss after the chip (filters etc.), dB.
        output_loss_db: f64,
        /// Decoy/signal intensity ratio in (0, 1].
        decoy_ratio: f64,
    },
}

/// One weak coherent pulse leaving the transmitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalPulse {
    /// Global pulse index within the session.
    pub index: u64,
    /// Jittered emission time, ns.
    pub emit_time_ns: f64,
    /// Mean photon number at unit polarization-path transmission.
    pub mu: MeanPhotonNumber,
    /// Polarization state; squared norm is the state's relative
    /// transmission through the polarization modulator.
    pub jones: JonesVector,
    /// Optical pulse width, ns.
    pub fwhm_ns: f64,
    pub intensity_class: IntensityClass,
}

impl OpticalPulse {
    /// Mean photon number actually leaving Alice.
    pub fn emitted_mu(&self) -> MeanPhotonNumber {
        self.mu.scaled(self.jones.power())
    }
}

/// Per-pulse preparation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub state: PolarizationState,
    pub class: IntensityClass,
}

/// Immutable transmitter: emission is a pure function of the
/// configuration, the burst index, the pattern, and the RNG stream.
#[derive(Debug, Clone)]
pub struct Transmitter {
    pub timing: TimingConfig,
    pub carver: Carver,
    pub shape: PulseShapeParams,
    pub voa: VoaParams,
    pub polmod: PolModParams,
    pub mu_source: MuSource,
    /// Emitted Jones vector per state (unnormalized).
    state_jones: [JonesVector; 4],
    /// Base µ per intensity class (unit polarization transmission).
    class_mu: [MeanPhotonNumber; 2],
    /// Attenuation the solved VOA actually provides, dB.
    voa_achieved_db: f64,
}

impl Transmitter {
    pub fn new(
        timing: TimingConfig,
        carver: Carver,
        shape: PulseShapeParams,
        voa: VoaParams,
        polmod: PolModParams,
        mu_source: MuSource,
    ) -> Result<Self, DeviceError> {
        timing.validate()?;
        let state_jones = [
            polmod.output(PolarizationState::H),
            polmod.output(PolarizationState::V),
            polmod.output(PolarizationState::D),
            polmod.output(PolarizationState::A),
        ];
        let mean_power = state_jones.iter().map(|j| j.power()).sum::<f64>() / 4.0;
        let (voa, voa_achieved_db, class_mu) = match mu_source {
            MuSource::Direct {
                signal_mu,
                decoy_mu,
            } => {
                if signal_mu < 0.0 || decoy_mu < 0.0 {
                    return Err(DeviceError::InvalidParam {
                        name: "mu",
                        reason: "mean photon numbers must be nonnegative".into(),
                    });
                }
                // `signal_mu` is the state-averaged flux leaving Alice;
                // rescale so the per-state Jones powers average back to it.
                let base = 1.0 / mean_power;
                (
                    voa,
                    0.0,
                    [
                        MeanPhotonNumber::new(signal_mu * base),
                        MeanPhotonNumber::new(decoy_mu * base),
                    ],
                )
            }
            MuSource::DeviceChain {
                source_mu,
                voa_target_db,
                output_loss_db,
                decoy_ratio,
            } => {
                if !(0.0..=1.0).contains(&decoy_ratio) {
                    return Err(DeviceError::InvalidParam {
                        name: "decoy_ratio",
                        reason: format!("must be in [0, 1], got {decoy_ratio}"),
                    });
                }
                let solved = voa.with_target(voa_target_db)?;
                let achieved = -solved.total_db();
                let signal = MeanPhotonNumber::new(source_mu)
                    .attenuated(achieved)
                    .attenuated(output_loss_db);
                (solved, achieved, [signal, signal.scaled(decoy_ratio)])
            }
        };
        Ok(Self {
            timing,
            carver,
            shape,
            voa,
            polmod,
            mu_source,
            state_jones,
            class_mu,
            voa_achieved_db,
        })
    }

    /// Base µ of an intensity class (before per-state transmission).
    pub fn class_mu(&self, class: IntensityClass) -> MeanPhotonNumber {
        match class {
            IntensityClass::Signal => self.class_mu[0],
            IntensityClass::Decoy => self.class_mu[1],
        }
    }

    /// Attenuation delivered by the solved VOA in device-chain mode, dB.
    pub fn voa_achieved_db(&self) -> f64 {
        self.voa_achieved_db
    }

    /// Emits one burst of pulses following `pattern`.
    ///
    /// Pulse `i` of burst `b` is nominally at `b/clock + i/rep_rate`,
    /// plus a per-pulse jitter draw.
    pub fn emit_burst<R: Rng + ?Sized>(
        &self,
        burst_index: u64,
        pattern: &[PulseSpec],
        rng: &mut R,
    ) -> Vec<OpticalPulse> {
        assert!(
            pattern.len() <= self.timing.pulses_per_burst as usize,
            "pattern longer than the configured burst"
        );
        let first_index = burst_index * self.timing.pulses_per_burst as u64;
        pattern
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                let jitter = self.shape.sample_jitter(rng);
                OpticalPulse {
                    index: first_index + i as u64,
                    emit_time_ns: self.timing.pulse_time_ns(burst_index, i as u32) + jitter,
                    mu: self.class_mu(spec.class),
                    jones: self.state_jones[spec.state.index()],
                    fwhm_ns: self.shape.fwhm_ns,
                    intensity_class: spec.class,
                }
            })
            .collect()
    }
}
