//! Deterministic Monte Carlo simulator of a polarization-encoded BB84
//! quantum key distribution link.
//!
//! The transmitter is modeled component by component after an integrated
//! silicon photonic chip: a pulse-carving microring modulator, an
//! intensity-modulating microring (signal/decoy levels), a four-stage
//! Mach-Zehnder variable optical attenuator, and an MZI + polarization
//! rotator-combiner polarization modulator. Pulses cross a fiber channel
//! with a random polarization rotation and are measured by a passive
//! basis choice receiver with four single-photon avalanche detectors,
//! followed by sifting, QBER estimation, and asymptotic secret-key-rate
//! analysis.
//!
//! Module layout:
//!
//! * [`optics`] — dB arithmetic, Jones calculus, BB84 states, Poisson
//!   photon statistics of weak coherent pulses.
//! * [`devices`] — physical models of the on-chip components and the
//!   transmitter assembly that emits pulse trains.
//! * [`link`] — fiber channel, receiver optics, SPAD detectors with dead
//!   time and dark counts, time-tagged histograms.
//! * [`protocol`] — BB84 encoding, sifting, QBER, binary entropy, and
//!   the no-decoy GLLP key-rate bound.
//! * [`harness`] — scenario configuration, session execution, device
//!   characterization sweeps, parameter sweeps, and report output.
//!
//! Every run is a pure function of its configuration, including the
//! seed: reruns are bit-identical.

pub mod devices;
pub mod harness;
pub mod link;
pub mod optics;
pub mod protocol;
pub mod seed;
