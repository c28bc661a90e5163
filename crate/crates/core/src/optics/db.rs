//! Decibel / linear power-ratio conversions.
//!
//! Sign convention: a parameter named `loss_db` or `attenuation_db` holds
//! the positive magnitude of a loss; everywhere else dB values are signed
//! (negative = attenuation).

use super::OpticsError;

/// Converts a signed dB value to a linear power ratio, `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a positive linear power ratio to dB, `10·log10(ratio)`.
pub fn linear_to_db(ratio: f64) -> Result<f64, OpticsError> {
    if ratio <= 0.0 || ratio.is_nan() {
        return Err(OpticsError::NonPositiveRatio(ratio));
    }
    Ok(10.0 * ratio.log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zero_db_is_unity() {
        assert_eq!(db_to_linear(0.0), 1.0);
    }

    #[test]
    fn minus_27_db() {
        assert_relative_eq!(db_to_linear(-27.0), 1.995262314968e-3, max_relative = 1e-11);
    }

    #[test]
    fn minus_6_1_db() {
        assert_relative_eq!(
            db_to_linear(-6.1),
            0.24547089156850306,
            max_relative = 1e-12
        );
    }

    #[test]
    fn nonpositive_ratio_is_domain_error() {
        assert_eq!(linear_to_db(0.0), Err(OpticsError::NonPositiveRatio(0.0)));
        assert!(linear_to_db(-3.0).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(db in -200.0f64..200.0) {
            let back = linear_to_db(db_to_linear(db)).unwrap();
            prop_assert!((back - db).abs() < 1e-10);
        }
    }
}
