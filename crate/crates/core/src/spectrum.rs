//! Complex probe-transmission spectra.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Cplx, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("spectrum is empty")]
    Empty,
    #[error("point {index}: frequency {omega} is not strictly above the previous point")]
    NotIncreasing { index: usize, omega: f64 },
    #[error("point {index}: non-finite value")]
    NonFinite { index: usize },
}

/// One probe frequency of a transmission sweep.
///
/// Transmission is held as its complex logarithm, `ln|S21| + iφ`, with φ
/// unwrapped along the sweep so it can be compared with an analytic model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint<T> {
    pub omega_p: T,
    pub ln_s21: Cplx<T>,
    /// Probe coherence `<3|ρ|1>` for simulated points.
    pub rho31: Option<Cplx<T>>,
}

impl<T: Real> SpectrumPoint<T> {
    pub fn s21(&self) -> Cplx<T> {
        self.ln_s21.exp()
    }

    pub fn ln_magnitude(&self) -> T {
        self.ln_s21.re
    }

    pub fn phase(&self) -> T {
        self.ln_s21.im
    }
}

/// Sweep with strictly increasing probe frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpectrum<T> {
    points: Vec<SpectrumPoint<T>>,
}

impl<T: Real> ComplexSpectrum<T> {
    pub fn new(points: Vec<SpectrumPoint<T>>) -> Result<Self, SpectrumError> {
        if points.is_empty() {
            return Err(SpectrumError::Empty);
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.omega_p.is_finite() && p.ln_s21.re.is_finite() && p.ln_s21.im.is_finite()) {
                return Err(SpectrumError::NonFinite { index: i });
            }
            if i > 0 && !(p.omega_p > points[i - 1].omega_p) {
                return Err(SpectrumError::NotIncreasing {
                    index: i,
                    omega: p.omega_p.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self { points })
    }

    /// Builds a spectrum from frequencies, `ln|S21|` and phase samples; the
    /// phase is unwrapped first.
    pub fn from_log_polar(omega: &[T], ln_mag: &[T], phase: &[T]) -> Result<Self, SpectrumError> {
        let mut ph = phase.to_vec();
        unwrap_phase(&mut ph);
        let pts = omega
            .iter()
            .zip(ln_mag)
            .zip(ph)
            .map(|((&w, &m), p)| SpectrumPoint {
                omega_p: w,
                ln_s21: Cplx::new(m, p),
                rho31: None,
            })
            .collect();
        Self::new(pts)
    }

    pub fn points(&self) -> &[SpectrumPoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn omegas(&self) -> Vec<T> {
        self.points.iter().map(|p| p.omega_p).collect()
    }

    pub fn ln_magnitudes(&self) -> Vec<T> {
        self.points.iter().map(|p| p.ln_s21.re).collect()
    }

    pub fn phases(&self) -> Vec<T> {
        self.points.iter().map(|p| p.ln_s21.im).collect()
    }
}

/// Removes 2π jumps between consecutive samples in place.
///
/// A jump is any step whose magnitude exceeds π; the correction is the
/// multiple of 2π that brings it into (−π, π]. Already continuous input is
/// left untouched bit for bit.
pub fn unwrap_phase<T: Real>(phase: &mut [T]) {
    let tau = T::TAU();
    let pi = T::PI();
    let mut offset = T::zero();
    let mut prev_raw = match phase.first() {
        Some(&p) => p,
        None => return,
    };
    for p in phase.iter_mut().skip(1) {
        let raw = *p;
        let step = raw - prev_raw;
        if step > pi || step < -pi {
            offset -= ((step + pi) / tau).floor() * tau;
        }
        prev_raw = raw;
        if offset != T::zero() {
            *p = raw + offset;
        }
    }
}
