//! Alice- and Bob-side records and the bit/basis encoding convention.
//!
//! Convention (any consistent bijection is equivalent): bit 0 maps to H
//! or D, bit 1 to V or A.

use rand::Rng;
use std::collections::BTreeMap;

use crate::link::DetectionEvent;
use crate::optics::{Basis, IntensityClass, PolarizationState};

/// One prepared pulse on Alice's side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliceRecord {
    pub pulse_index: u64,
    pub bit: bool,
    pub basis: Basis,
    pub intensity_class: IntensityClass,
}

impl AliceRecord {
    /// Polarization state this record prepares.
    pub fn state(&self) -> PolarizationState {
        encode(self.bit, self.basis)
    }
}

/// Maps (bit, basis) onto the four states: (0,R)→H, (1,R)→V, (0,D)→D,
/// (1,D)→A.
pub fn encode(bit: bool, basis: Basis) -> PolarizationState {
    match (bit, basis) {
        (false, Basis::Rectilinear) => PolarizationState::H,
        (true, Basis::Rectilinear) => PolarizationState::V,
        (false, Basis::Diagonal) => PolarizationState::D,
        (true, Basis::Diagonal) => PolarizationState::A,
    }
}

/// Inverse of [`encode`].
pub fn decode(state: PolarizationState) -> (bool, Basis) {
    match state {
        PolarizationState::H => (false, Basis::Rectilinear),
        PolarizationState::V => (true, Basis::Rectilinear),
        PolarizationState::D => (false, Basis::Diagonal),
        PolarizationState::A => (true, Basis::Diagonal),
    }
}

/// I.i.d.-uniform bits and bases with decoy pulses at `decoy_probability`,
/// starting at pulse index 0.
pub fn random_pattern<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    decoy_probability: f64,
) -> Vec<AliceRecord> {
    random_pattern_offset(rng, 0, n, decoy_probability)
}

/// Same as [`random_pattern`] with the first pulse index given (burst
/// slices of a longer session).
pub fn random_pattern_offset<R: Rng + ?Sized>(
    rng: &mut R,
    first_index: u64,
    n: usize,
    decoy_probability: f64,
) -> Vec<AliceRecord> {
    (0..n)
        .map(|i| {
            let bit = rng.random::<bool>();
            let basis = if rng.random::<bool>() {
                Basis::Rectilinear
            } else {
                Basis::Diagonal
            };
            let decoy = rng.random::<f64>() < decoy_probability;
            AliceRecord {
                pulse_index: first_index + i as u64,
                bit,
                basis,
                intensity_class: if decoy {
                    IntensityClass::Decoy
                } else {
                    IntensityClass::Signal
                },
            }
        })
        .collect()
}

/// Random bits/bases with the intensity class alternating every pulse
/// (signal on even indices), as driven by a square wave at half the
/// repetition rate.
pub fn alternating_pattern<R: Rng + ?Sized>(
    rng: &mut R,
    first_index: u64,
    n: usize,
) -> Vec<AliceRecord> {
    let mut records = random_pattern_offset(rng, first_index, n, 0.0);
    for r in records.iter_mut() {
        if r.pulse_index % 2 == 1 {
            r.intensity_class = IntensityClass::Decoy;
        }
    }
    records
}

/// One resolved detection on Bob's side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BobRecord {
    pub pulse_index: u64,
    pub detector: PolarizationState,
}

impl BobRecord {
    pub fn basis(&self) -> Basis {
        self.detector.basis()
    }

    pub fn bit(&self) -> bool {
        decode(self.detector).0
    }
}

/// Collapses pulse-indexed detection events to at most one record per
/// pulse. When several detectors fire on one pulse (a double click), one
/// is chosen uniformly at random — the squashing rule: a random bit
/// within whichever basis fired. Events without a pulse index are
/// ignored.
pub fn resolve_clicks<R: Rng + ?Sized>(events: &[DetectionEvent], rng: &mut R) -> Vec<BobRecord> {
    let mut fired: BTreeMap<u64, Vec<PolarizationState>> = BTreeMap::new();
    for e in events {
        if let Some(idx) = e.pulse_index {
            fired.entry(idx).or_default().push(e.detector);
        }
    }
    fired
        .into_iter()
        .map(|(pulse_index, detectors)| {
            let detector = if detectors.len() == 1 {
                detectors[0]
            } else {
                detectors[rng.random_range(0..detectors.len())]
            };
            BobRecord {
                pulse_index,
                detector,
            }
        })
        .collect()
}
