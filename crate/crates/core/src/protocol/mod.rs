//! The BB84 layer: pattern generation, bit/basis encoding, sifting, QBER
//! estimation, and the asymptotic secret-key-rate formulas.

mod rates;
mod records;
mod sift;

pub use rates::{
    binary_entropy, gllp_rate_no_decoy, shor_preskill_fraction, shor_preskill_threshold,
    SessionStats,
};
pub use records::{
    alternating_pattern, decode, encode, random_pattern, random_pattern_offset, resolve_clicks,
    AliceRecord, BobRecord,
};
pub use sift::{qber, sift, SiftedPair};

use thiserror::Error;

/// Errors raised by the protocol layer.
#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    /// QBER is undefined without sifted bits.
    #[error("no sifted bits; QBER undefined")]
    EmptySifted,
    /// Alice's records must be uniquely keyed by pulse index.
    #[error("duplicate pulse index {0} in Alice's records")]
    DuplicatePulseIndex(u64),
    /// Bob reported a pulse Alice never emitted.
    #[error("pulse index {0} has no matching Alice record")]
    UnknownPulseIndex(u64),
    /// Argument outside its mathematical domain.
    #[error("{name} = {value} outside {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
}
