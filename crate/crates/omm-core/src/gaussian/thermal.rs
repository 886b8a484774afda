//! Bose–Einstein thermal occupation.

use crate::constants::{BOLTZMANN, HBAR};

use super::matrices::GaussianError;

/// Mean thermal excitation number `N(ω) = [exp(ℏω/k_B T) − 1]⁻¹` of a
/// bath mode at angular frequency `omega` \[rad/s\] and temperature
/// `temperature` \[K\]. Returns exactly 0 at T = 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64, GaussianError> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(GaussianError::NonPositiveFrequency);
    }
    if temperature < 0.0 {
        return Err(GaussianError::NegativeTemperature);
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * omega / (BOLTZMANN * temperature);
    // exp_m1 keeps precision at small x; at large x it overflows to +inf
    // and the occupation correctly underflows to zero.
    Ok(1.0 / x.exp_m1())
}
