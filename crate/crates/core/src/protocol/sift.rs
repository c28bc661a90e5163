//! Basis sifting and QBER estimation.

use std::collections::HashMap;

use super::{AliceRecord, BobRecord, ProtocolError};

/// One sifted key bit pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiftedPair {
    pub pulse_index: u64,
    pub alice_bit: bool,
    pub bob_bit: bool,
}

/// Keeps the detections where Bob's measurement basis matches Alice's
/// preparation basis. Records are matched by pulse index; dark counts
/// never reach this point (they carry no pulse index).
pub fn sift(alice: &[AliceRecord], bob: &[BobRecord]) -> Result<Vec<SiftedPair>, ProtocolError> {
    let mut by_index: HashMap<u64, &AliceRecord> = HashMap::with_capacity(alice.len());
    for record in alice {
        if by_index.insert(record.pulse_index, record).is_some() {
            return Err(ProtocolError::DuplicatePulseIndex(record.pulse_index));
        }
    }
    let mut kept = Vec::new();
    for b in bob {
        let a = by_index
            .get(&b.pulse_index)
            .ok_or(ProtocolError::UnknownPulseIndex(b.pulse_index))?;
        if a.basis == b.basis() {
            kept.push(SiftedPair {
                pulse_index: b.pulse_index,
                alice_bit: a.bit,
                bob_bit: b.bit(),
            });
        }
    }
    Ok(kept)
}

/// Fraction of sifted pairs with unequal bits.
pub fn qber(sifted: &[SiftedPair]) -> Result<f64, ProtocolError> {
    if sifted.is_empty() {
        return Err(ProtocolError::EmptySifted);
    }
    let errors = sifted.iter().filter(|p| p.alice_bit != p.bob_bit).count();
    Ok(errors as f64 / sifted.len() as f64)
}
