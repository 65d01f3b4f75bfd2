use crate::scalar::Real;

use super::model::phase_derivative;
use super::{FitError, FitResult};

/// Group delay `τg = −dφ/dωp` of a fitted model, seconds.
pub fn group_delay<T: Real>(fit: &FitResult<T>, omega_p: T) -> T {
    -phase_derivative(&fit.params, omega_p)
}

/// Group velocity `vg = l/τg`, m/s.
pub fn group_velocity<T: Real>(tau_g: T, length: T) -> Result<T, FitError> {
    if tau_g == T::zero() {
        return Err(FitError::ZeroDelay);
    }
    Ok(length / tau_g)
}
