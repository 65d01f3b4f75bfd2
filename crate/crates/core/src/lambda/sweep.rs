use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fit::model::{ln_s21_from_susceptibility, BaselineParams};
use crate::scalar::{Cplx, Real};
use crate::spectrum::{ComplexSpectrum, SpectrumPoint};

use super::{steady_state, LambdaConfig, LambdaError};

/// Maps a probe coherence onto a transmission coefficient.
///
/// The susceptibility is `χs = scale · conj(ρ31) / Ωp`. The conjugate moves
/// the coherence from the `e^{-iHt}` convention of the master equation to the
/// `(ωp − ω0) − iΓ/2` line shapes of the transmission models, so that a
/// single driven transition is exactly one Lorentzian with amplitude
/// `scale · (ρ11 − ρ33) / 2`. A negative scale renders that line as a
/// transmission peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmissionMapping<T> {
    pub baseline: BaselineParams<T>,
    /// rad/s
    pub scale: T,
}

impl<T: Real> TransmissionMapping<T> {
    pub fn susceptibility(&self, rho31: Cplx<T>, probe_rabi: T) -> Cplx<T> {
        rho31.conj() * (self.scale / probe_rabi)
    }
}

/// Steady-state probe transmission at each frequency of `omega_p_grid`.
///
/// Points are solved independently (in parallel) and collected in grid order,
/// so the result does not depend on scheduling.
pub fn probe_sweep<T: Real>(
    template: &LambdaConfig<T>,
    omega_p_grid: &[T],
    mapping: &TransmissionMapping<T>,
) -> Result<ComplexSpectrum<T>, LambdaError> {
    if omega_p_grid.is_empty() {
        return Err(LambdaError::InvalidGrid("empty probe grid".into()));
    }
    if let Some(i) = omega_p_grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(LambdaError::InvalidGrid(format!(
            "probe grid not strictly increasing at index {}",
            i + 1
        )));
    }
    if !(template.probe_rabi > T::zero()) {
        return Err(LambdaError::InvalidConfig(
            "probe_rabi must be > 0 for a transmission sweep".into(),
        ));
    }
    if !(mapping.baseline.l_eff > T::zero()) {
        return Err(LambdaError::InvalidConfig(
            "mapping l_eff must be > 0".into(),
        ));
    }
    let points = omega_p_grid
        .par_iter()
        .map(|&omega_p| {
            let cfg = LambdaConfig {
                probe_omega: omega_p,
                ..*template
            };
            let rho = steady_state(&cfg).map_err(|e| LambdaError::AtFrequency {
                omega_p: omega_p.to_f64().unwrap_or(f64::NAN),
                source: Box::new(e),
            })?;
            let rho31 = rho.rho31();
            let chi = mapping.susceptibility(rho31, template.probe_rabi);
            Ok(SpectrumPoint {
                omega_p,
                ln_s21: ln_s21_from_susceptibility(&mapping.baseline, omega_p, chi),
                rho31: Some(rho31),
            })
        })
        .collect::<Result<Vec<_>, LambdaError>>()?;
    ComplexSpectrum::new(points).map_err(|e| LambdaError::InvalidGrid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn template() -> LambdaConfig<f64> {
        LambdaConfig {
            omega_13: 100.0,
            omega_23: 80.0,
            gamma_31: 0.35,
            gamma_32: 0.47,
            gamma_21: 0.00274,
            gamma_phi2: 0.0,
            gamma_phi3: 0.0,
            probe_rabi: 0.0062,
            probe_omega: 100.0,
            control_rabi: 0.0,
            control_omega: 80.0,
        }
    }

    fn mapping() -> TransmissionMapping<f64> {
        TransmissionMapping {
            baseline: BaselineParams {
                l_eff: 1.0e7,
                alpha0: 0.1,
                phi0: 0.0,
            },
            scale: -0.05,
        }
    }

    #[test]
    fn control_off_gives_single_line_at_omega_13() {
        let grid: Vec<f64> = (0..201).map(|k| 98.0 + 0.02 * k as f64).collect();
        let s = probe_sweep(&template(), &grid, &mapping()).unwrap();
        let mags = s.ln_magnitudes();
        let imax = mags
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!((grid[imax] - 100.0).abs() < 1e-9);
        // single extremum: monotone on each side
        assert!(mags[..=imax].windows(2).all(|w| w[1] >= w[0]));
        assert!(mags[imax..].windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn grid_must_increase() {
        let err = probe_sweep(&template(), &[1.0, 1.0], &mapping()).unwrap_err();
        assert!(matches!(err, LambdaError::InvalidGrid(_)));
    }

    #[test]
    fn solver_errors_carry_frequency() {
        let bad = LambdaConfig {
            gamma_31: 0.0,
            gamma_32: 0.0,
            gamma_21: 0.0,
            ..template()
        };
        match probe_sweep(&bad, &[99.0, 100.0], &mapping()).unwrap_err() {
            LambdaError::AtFrequency { omega_p, source } => {
                assert_eq!(omega_p, 99.0);
                assert!(matches!(*source, LambdaError::SingularSystem { .. }));
            }
            e => panic!("unexpected {e:?}"),
        }
    }
}
