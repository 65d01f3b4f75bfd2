//! Conversion between ordinary frequency and angular frequency.
//!
//! Every quantity inside the library is angular (rad/s). The factor of 2π is
//! applied here and nowhere else.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Unit attached to a frequency-valued number at an input/output boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreqUnit {
    /// Ordinary frequency in Hz (value is ω/2π).
    Hz,
    /// Ordinary frequency in MHz (value is ω/2π in MHz).
    Mhz2Pi,
    /// Angular frequency in rad/s.
    Rads,
}

impl FreqUnit {
    /// Suffix used for this unit in configuration keys and CSV headers.
    pub fn suffix(self) -> &'static str {
        match self {
            FreqUnit::Hz => "hz",
            FreqUnit::Mhz2Pi => "mhz_2pi",
            FreqUnit::Rads => "rads",
        }
    }

    pub const ALL: [FreqUnit; 3] = [FreqUnit::Hz, FreqUnit::Mhz2Pi, FreqUnit::Rads];
}

/// Converts a value in `unit` to rad/s.
pub fn to_rads<T: Real>(value: T, unit: FreqUnit) -> T {
    match unit {
        FreqUnit::Hz => value * T::TAU(),
        FreqUnit::Mhz2Pi => value * T::lit(1e6) * T::TAU(),
        FreqUnit::Rads => value,
    }
}

/// Converts rad/s to `unit`.
pub fn from_rads<T: Real>(omega: T, unit: FreqUnit) -> T {
    match unit {
        FreqUnit::Hz => omega / T::TAU(),
        FreqUnit::Mhz2Pi => omega / T::TAU() / T::lit(1e6),
        FreqUnit::Rads => omega,
    }
}

#[inline]
pub fn hz<T: Real>(f: T) -> T {
    to_rads(f, FreqUnit::Hz)
}

#[inline]
pub fn mhz_2pi<T: Real>(f: T) -> T {
    to_rads(f, FreqUnit::Mhz2Pi)
}

#[inline]
pub fn to_hz<T: Real>(omega: T) -> T {
    from_rads(omega, FreqUnit::Hz)
}

/// Energy decay rate (rad/s) from a lifetime in seconds.
pub fn rate_from_lifetime<T: Real>(t1_seconds: T) -> T {
    T::one() / t1_seconds
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ulps_apart(a: f64, b: f64) -> u64 {
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
    }

    #[test]
    fn known_conversions() {
        assert_eq!(to_rads(1.0, FreqUnit::Rads), 1.0);
        assert!((hz(1.0_f64) - std::f64::consts::TAU).abs() < 1e-15);
        assert!((mhz_2pi(1.0_f64) - 2.0e6 * std::f64::consts::PI).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn hz_round_trip_within_one_ulp(f in 1.0e-3f64..1.0e12) {
            let back = to_hz(hz(f));
            prop_assert!(ulps_apart(back, f) <= 1, "{f} -> {back}");
        }
    }
}
