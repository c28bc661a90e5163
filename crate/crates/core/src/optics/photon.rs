//! Photon-number statistics of weak coherent pulses.
//!
//! An attenuated laser pulse carries a Poisson-distributed photon number;
//! everything here is parameterized by its mean.

use rand::Rng;

/// Mean photon number per pulse (dimensionless, ≥ 0).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MeanPhotonNumber(f64);

impl MeanPhotonNumber {
    pub const ZERO: Self = Self(0.0);

    /// Panics if `mu` is negative or non-finite.
    pub fn new(mu: f64) -> Self {
        assert!(
            mu.is_finite() && mu >= 0.0,
            "mean photon number must be finite and nonnegative, got {mu}"
        );
        Self(mu)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Mean photon number after a loss of `loss_db` (positive magnitude).
    pub fn attenuated(self, loss_db: f64) -> Self {
        debug_assert!(loss_db >= 0.0, "loss magnitude must be nonnegative");
        Self(self.0 * 10f64.powf(-loss_db / 10.0))
    }

    /// Scales by a transmission factor in [0, ∞).
    pub fn scaled(self, factor: f64) -> Self {
        Self::new(self.0 * factor)
    }
}

/// Mean photon number after a loss of `loss_db` (positive magnitude).
pub fn attenuate(mu: MeanPhotonNumber, loss_db: f64) -> MeanPhotonNumber {
    mu.attenuated(loss_db)
}

/// Poisson probability mass `e^(−µ)·µⁿ/n!`.
pub fn poisson_pmf(mu: MeanPhotonNumber, n: u32) -> f64 {
    let mu = mu.get();
    let mut p = (-mu).exp();
    for k in 1..=n {
        p *= mu / k as f64;
    }
    p
}

/// Samples a Poisson photon number by inversion with sequential search.
///
/// Exact and branch-simple for the small means used here (µ ≪ 1; do not
/// use for µ ≳ 10² where the linear search becomes slow).
pub fn poisson_sample<R: Rng + ?Sized>(mu: MeanPhotonNumber, rng: &mut R) -> u32 {
    let mu = mu.get();
    let mut p = (-mu).exp();
    let mut acc = p;
    let u: f64 = rng.random();
    let mut n = 0u32;
    while u > acc && p > 0.0 {
        n += 1;
        p *= mu / n as f64;
        acc += p;
    }
    n
}

/// Probability that a pulse carries two or more photons,
/// `P(n ≥ 2) = 1 − e^(−µ)(1 + µ)`.
pub fn multi_photon_probability(mu: MeanPhotonNumber) -> f64 {
    let mu = mu.get();
    let p = 1.0 - (-mu).exp() * (1.0 + mu);
    p.max(0.0)
}

/// Signal or decoy intensity level of a pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntensityClass {
    Signal,
    Decoy,
}
