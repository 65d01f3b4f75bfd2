use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

use super::{steady_state, DensityMatrix3, LambdaConfig, LambdaError};

fn dark_angle<T: Real>(probe_rabi: T, control_rabi: T) -> Result<T, LambdaError> {
    if probe_rabi == T::zero() && control_rabi == T::zero() {
        return Err(LambdaError::DegenerateAngle);
    }
    Ok(probe_rabi.atan2(control_rabi))
}

/// `<D|ρ|D>` for `|D> = cosΘ|1> − sinΘ|2>`, `Θ = atan2(Ωp, Ωc)`.
pub fn dark_state_population<T: Real>(
    rho: &DensityMatrix3<T>,
    probe_rabi: T,
    control_rabi: T,
) -> Result<T, LambdaError> {
    let theta = dark_angle(probe_rabi, control_rabi)?;
    let (s, c) = theta.sin_cos();
    let coh = (rho.element(1, 2) + rho.element(2, 1)).re;
    Ok(c * c * rho.population(1) + s * s * rho.population(2) - s * c * coh)
}

/// Dark-state fidelity `√<D|ρ|D>`.
pub fn dark_state_fidelity<T: Real>(
    rho: &DensityMatrix3<T>,
    probe_rabi: T,
    control_rabi: T,
) -> Result<T, LambdaError> {
    let p = dark_state_population(rho, probe_rabi, control_rabi)?;
    Ok(p.max(T::zero()).sqrt())
}

/// Expanded trigonometric form
/// `√(½[cos2Θ(ρ11 − ρ22) − sin2Θ(ρ21 + ρ12) + ρ11 + ρ22])`.
///
/// Identical to [`dark_state_fidelity`] for any ρ.
pub fn dark_state_fidelity_expanded<T: Real>(
    rho: &DensityMatrix3<T>,
    probe_rabi: T,
    control_rabi: T,
) -> Result<T, LambdaError> {
    let theta = dark_angle(probe_rabi, control_rabi)?;
    let two_theta = T::two() * theta;
    let r11 = rho.population(1);
    let r22 = rho.population(2);
    let coh = (rho.element(2, 1) + rho.element(1, 2)).re;
    let v = T::half() * (two_theta.cos() * (r11 - r22) - two_theta.sin() * coh + r11 + r22);
    Ok(v.max(T::zero()).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow<T> {
    pub probe_rabi: T,
    pub control_rabi: T,
    pub fidelity: T,
}

/// Steady-state dark-state fidelity over `(Ωp, Ωc)` pairs.
///
/// Both strengths are taken from the grid, so either role assignment is a
/// matter of which column holds the large value.
pub fn fidelity_scan<T: Real>(
    template: &LambdaConfig<T>,
    grid: &[(T, T)],
) -> Result<Vec<FidelityRow<T>>, LambdaError> {
    if grid.is_empty() {
        return Err(LambdaError::InvalidGrid("empty strength grid".into()));
    }
    grid.par_iter()
        .map(|&(probe_rabi, control_rabi)| {
            let cfg = LambdaConfig {
                probe_rabi,
                control_rabi,
                ..*template
            };
            let rho = steady_state(&cfg)?;
            Ok(FidelityRow {
                probe_rabi,
                control_rabi,
                fidelity: dark_state_fidelity(&rho, probe_rabi, control_rabi)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn dark(theta: f64) -> DensityMatrix3<f64> {
        DensityMatrix3::pure([
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(-theta.sin(), 0.0),
            Complex64::new(0.0, 0.0),
        ])
    }

    #[test]
    fn pure_dark_state_has_unit_fidelity() {
        let (p, c) = (0.3, 0.7);
        let f = dark_state_fidelity(&dark(f64::atan2(p, c)), p, c).unwrap();
        assert_relative_eq!(f, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn control_off_dark_state_is_level_two() {
        let rho = DensityMatrix3::pure([
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        assert_relative_eq!(
            dark_state_fidelity(&rho, 1.0, 0.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn both_strengths_zero_is_degenerate() {
        assert_eq!(
            dark_state_fidelity(&dark(0.0), 0.0, 0.0),
            Err(LambdaError::DegenerateAngle)
        );
        assert_eq!(
            fidelity_scan(&template(), &[]).unwrap_err(),
            LambdaError::InvalidGrid("empty strength grid".into())
        );
    }

    #[test]
    fn expanded_form_agrees_on_mixed_state() {
        let mut rho = dark(0.4);
        rho.rho[0][0] = Complex64::new(0.6, 0.0);
        rho.rho[1][1] = Complex64::new(0.3, 0.0);
        rho.rho[2][2] = Complex64::new(0.1, 0.0);
        rho.rho[0][1] = Complex64::new(-0.2, 0.05);
        rho.rho[1][0] = Complex64::new(-0.2, -0.05);
        for (p, c) in [(0.1, 1.0), (1.0, 1.0), (1.0, 0.0), (2.0, 0.3)] {
            assert_relative_eq!(
                dark_state_fidelity(&rho, p, c).unwrap(),
                dark_state_fidelity_expanded(&rho, p, c).unwrap(),
                epsilon = 1e-14
            );
        }
    }

    fn template() -> LambdaConfig<f64> {
        LambdaConfig {
            omega_13: 100.0,
            omega_23: 80.0,
            gamma_31: 0.35,
            gamma_32: 0.47,
            gamma_21: 0.00274,
            gamma_phi2: 0.0,
            gamma_phi3: 0.0,
            probe_rabi: 0.0,
            probe_omega: 100.0,
            control_rabi: 0.0,
            control_omega: 80.0,
        }
    }

    #[test]
    fn vanishing_drives_give_unit_fidelity() {
        let rows = fidelity_scan(&template(), &[(1e-9, 1.0), (1e-7, 1e-3)]).unwrap();
        for r in rows {
            assert!(r.fidelity > 1.0 - 1e-6, "{r:?}");
        }
    }
}
