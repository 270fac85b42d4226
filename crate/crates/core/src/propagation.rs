//! Free-space channel physics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Distances below this are evaluated at this distance by the Friis model.
pub const NEAR_FIELD_MIN_M: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("{what} must be non-negative, got {value}")]
    Negative { what: &'static str, value: f64 },
    #[error("system loss must be >= 1, got {0}")]
    LossBelowUnity(f64),
}

/// A radio channel: carrier, occupied bandwidth and bit rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Channel {
    pub id: String,
    pub frequency_hz: f64,
    pub bandwidth_hz: f64,
    pub data_rate_bps: f64,
}

impl Channel {
    /// Occupied band `[f - B/2, f + B/2]`.
    pub fn band(&self) -> (f64, f64) {
        let half = self.bandwidth_hz / 2.0;
        (self.frequency_hz - half, self.frequency_hz + half)
    }

    pub fn check(&self) -> Result<(), PropagationError> {
        positive("frequency", self.frequency_hz)?;
        positive("bandwidth", self.bandwidth_hz)?;
        positive("data rate", self.data_rate_bps)?;
        Ok(())
    }
}

fn positive(what: &'static str, value: f64) -> Result<f64, PropagationError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(PropagationError::NonPositive { what, value })
    }
}

fn non_negative(what: &'static str, value: f64) -> Result<f64, PropagationError> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(PropagationError::Negative { what, value })
    }
}

/// Carrier wavelength `c/f` in meters.
pub fn wavelength(frequency_hz: f64) -> Result<f64, PropagationError> {
    Ok(SPEED_OF_LIGHT / positive("frequency", frequency_hz)?)
}

/// Friis free-space received power in watts,
/// `P_t·G_t·G_r·λ² / ((4π)²·d²·L)`.
///
/// Distances under [`NEAR_FIELD_MIN_M`] are clamped. A gain of exactly zero
/// (a pattern null) is accepted and yields zero power.
pub fn friis_received_power(
    tx_power_w: f64,
    tx_gain: f64,
    rx_gain: f64,
    wavelength_m: f64,
    distance_m: f64,
    loss: f64,
) -> Result<f64, PropagationError> {
    positive("transmit power", tx_power_w)?;
    non_negative("transmit gain", tx_gain)?;
    non_negative("receive gain", rx_gain)?;
    positive("wavelength", wavelength_m)?;
    non_negative("distance", distance_m)?;
    if !(loss >= 1.0 && loss.is_finite()) {
        return Err(PropagationError::LossBelowUnity(loss));
    }
    let d = distance_m.max(NEAR_FIELD_MIN_M);
    let four_pi_d = 4.0 * PI * d;
    Ok(tx_power_w * tx_gain * rx_gain * wavelength_m * wavelength_m / (four_pi_d * four_pi_d * loss))
}

/// Time of flight over `distance_m`.
pub fn propagation_delay(distance_m: f64) -> f64 {
    distance_m / SPEED_OF_LIGHT
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn wavelength_examples() {
        assert_eq!(wavelength(SPEED_OF_LIGHT).unwrap(), 1.0);
        assert!(rel(wavelength(2.4e9).unwrap(), 0.12491352416666667) < 1e-15);
        assert_eq!(wavelength(1.2e9).unwrap(), 2.0 * wavelength(2.4e9).unwrap());
        assert!(wavelength(0.0).is_err());
        assert!(wavelength(-1.0).is_err());
    }

    #[test]
    fn friis_example() {
        // 20·0.015625/((4π)²·1e6) from mpmath
        let p = friis_received_power(20.0, 1.0, 1.0, 0.125, 1000.0, 1.0).unwrap();
        assert!(rel(p, 1.978_929_368_014_41e-9) < 1e-12);
        let far = friis_received_power(20.0, 1.0, 1.0, 0.125, 2000.0, 1.0).unwrap();
        assert_eq!(far, p * 0.25);
        let lossy = friis_received_power(20.0, 1.0, 1.0, 0.125, 1000.0, 2.0).unwrap();
        assert!(rel(lossy, p / 2.0) < 1e-15);
    }

    #[test]
    fn friis_clamps_near_field() {
        let at_min = friis_received_power(1.0, 1.0, 1.0, 0.1, NEAR_FIELD_MIN_M, 1.0).unwrap();
        assert_eq!(friis_received_power(1.0, 1.0, 1.0, 0.1, 0.0, 1.0).unwrap(), at_min);
        assert_eq!(friis_received_power(1.0, 1.0, 1.0, 0.1, 0.3, 1.0).unwrap(), at_min);
    }

    #[test]
    fn friis_rejects_bad_inputs() {
        assert!(friis_received_power(0.0, 1.0, 1.0, 0.1, 10.0, 1.0).is_err());
        assert!(friis_received_power(1.0, -1.0, 1.0, 0.1, 10.0, 1.0).is_err());
        assert!(friis_received_power(1.0, 1.0, 1.0, 0.1, 10.0, 0.5).is_err());
        assert_eq!(friis_received_power(1.0, 0.0, 1.0, 0.1, 10.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn delay_examples() {
        assert_eq!(propagation_delay(0.0), 0.0);
        assert_eq!(propagation_delay(SPEED_OF_LIGHT), 1.0);
        assert!(rel(propagation_delay(3000.0), 1.0006922855944561e-5) < 1e-14);
    }

    proptest! {
        #[test]
        fn inverse_square(d in 1.0f64..1e5) {
            let a = friis_received_power(20.0, 3.0, 5.0, 0.125, d, 1.0).unwrap();
            let b = friis_received_power(20.0, 3.0, 5.0, 0.125, 2.0 * d, 1.0).unwrap();
            prop_assert_eq!(b / a, 0.25);
        }

        #[test]
        fn reciprocity(gt in 0.01f64..100.0, gr in 0.01f64..100.0, d in 1.0f64..1e4) {
            prop_assert_eq!(
                friis_received_power(1.0, gt, gr, 0.2, d, 1.5).unwrap(),
                friis_received_power(1.0, gr, gt, 0.2, d, 1.5).unwrap()
            );
        }

        #[test]
        fn monotone_in_distance(d in 0.0f64..1e4, step in 0.0f64..100.0) {
            let near = friis_received_power(20.0, 1.0, 1.0, 0.125, d, 1.0).unwrap();
            let far = friis_received_power(20.0, 1.0, 1.0, 0.125, d + step, 1.0).unwrap();
            prop_assert!(far <= near);
        }

        #[test]
        fn unity_gains_match_free_space_factor(d in 1.0f64..1e5, lambda in 0.01f64..10.0, pt in 0.1f64..100.0) {
            let p = friis_received_power(pt, 1.0, 1.0, lambda, d, 1.0).unwrap();
            let expected = pt * (lambda / (4.0 * PI * d)).powi(2);
            prop_assert!(rel(p, expected) < 1e-12);
        }
    }
}
