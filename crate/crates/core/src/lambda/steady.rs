use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian3_eigenvalues, solve_complex};
use crate::scalar::{cr, Cplx, Real};

use super::liouvillian::{apply, build_liouvillian, unvectorize, vectorize, Matrix3};
use super::{LambdaConfig, LambdaError};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue still accepted as roundoff around zero.
pub const POSITIVITY_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-13;

/// Steady-state density matrix over `{|1>, |2>, |3>}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix3<T> {
    pub rho: Matrix3<T>,
}

impl<T: Real> DensityMatrix3<T> {
    pub fn pure(amplitudes: [Cplx<T>; 3]) -> Self {
        let mut rho = [[cr(T::zero()); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                rho[i][j] = amplitudes[i] * amplitudes[j].conj();
            }
        }
        Self { rho }
    }

    /// Element `<i|ρ|j>` with 1-based level labels.
    pub fn element(&self, i: usize, j: usize) -> Cplx<T> {
        self.rho[i - 1][j - 1]
    }

    /// Probe coherence `<3|ρ|1>`.
    pub fn rho31(&self) -> Cplx<T> {
        self.rho[2][0]
    }

    pub fn population(&self, level: usize) -> T {
        self.rho[level - 1][level - 1].re
    }

    pub fn trace(&self) -> Cplx<T> {
        self.rho[0][0] + self.rho[1][1] + self.rho[2][2]
    }

    /// Largest `|ρij − ρji*|`.
    pub fn hermiticity_error(&self) -> T {
        let mut e = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                e = e.max((self.rho[i][j] - self.rho[j][i].conj()).norm());
            }
        }
        e
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [T; 3] {
        let mut h = self.rho;
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = (self.rho[i][j] + self.rho[j][i].conj()) * T::half();
            }
        }
        hermitian3_eigenvalues(&h)
    }

    fn check_physical(&self) -> Result<(), LambdaError> {
        let herm = self.hermiticity_error();
        let tr = (self.trace() - cr(T::one())).norm();
        let min_eig = self.eigenvalues()[0];
        if herm > T::lit(HERMITIAN_TOL)
            || tr > T::lit(TRACE_TOL)
            || min_eig < -T::lit(POSITIVITY_TOL)
        {
            return Err(LambdaError::NonPhysical {
                min_eigenvalue: min_eig.to_f64().unwrap_or(f64::NAN),
                hermiticity_error: herm.to_f64().unwrap_or(f64::NAN),
                trace_error: tr.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

/// Steady state of the Λ master equation by a direct linear solve.
///
/// The superoperator is normalised by its largest entry, the equation for
/// `dρ11/dt` is replaced by `Tr ρ = 1`, and the 9×9 system is solved with
/// partial pivoting.
pub fn steady_state<T: Real>(cfg: &LambdaConfig<T>) -> Result<DensityMatrix3<T>, LambdaError> {
    cfg.validate()?;
    let total_rate = cfg.gamma_31 + cfg.gamma_32 + cfg.gamma_21 + cfg.gamma_phi2 + cfg.gamma_phi3;
    if total_rate == T::zero() {
        return Err(LambdaError::SingularSystem {
            condition_estimate: f64::INFINITY,
        });
    }
    let l = build_liouvillian(cfg);
    let scale = l.iter().flatten().fold(T::zero(), |m, z| m.max(z.norm()));
    let mut a = l;
    for row in a.iter_mut() {
        for z in row.iter_mut() {
            *z /= scale;
        }
    }
    let mut b = [cr(T::zero()); 9];
    a[0] = [cr(T::zero()); 9];
    for k in [0usize, 4, 8] {
        a[0][k] = cr(T::one());
    }
    b[0] = cr(T::one());
    let (x, _cond) =
        solve_complex(a, b, T::lit(PIVOT_TOL)).map_err(|e| LambdaError::SingularSystem {
            condition_estimate: e.condition_estimate.to_f64().unwrap_or(f64::INFINITY),
        })?;

    let residual = apply(&l, &x).iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if residual > T::lit(RESIDUAL_TOL) * scale {
        return Err(LambdaError::SingularSystem {
            condition_estimate: (residual / (scale * T::epsilon()))
                .to_f64()
                .unwrap_or(f64::INFINITY),
        });
    }
    let raw = DensityMatrix3 {
        rho: unvectorize(&x),
    };
    raw.check_physical()?;
    // remove roundoff-level anti-Hermitian part
    let mut rho = raw.rho;
    for i in 0..3 {
        for j in 0..3 {
            rho[i][j] = (raw.rho[i][j] + raw.rho[j][i].conj()) * T::half();
        }
    }
    Ok(DensityMatrix3 { rho })
}

/// Residual `max |L vec(ρ)|` of a candidate steady state.
pub fn steady_state_residual<T: Real>(cfg: &LambdaConfig<T>, rho: &DensityMatrix3<T>) -> T {
    apply(&build_liouvillian(cfg), &vectorize(&rho.rho))
        .iter()
        .fold(T::zero(), |m, z| m.max(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn cfg() -> LambdaConfig<f64> {
        LambdaConfig {
            omega_13: 100.0,
            omega_23: 80.0,
            gamma_31: 0.35,
            gamma_32: 0.47,
            gamma_21: 0.00274,
            gamma_phi2: 0.0,
            gamma_phi3: 0.0,
            probe_rabi: 0.062,
            probe_omega: 100.0,
            control_rabi: 0.82,
            control_omega: 80.0,
        }
    }

    #[test]
    fn undriven_population_relaxes_to_ground() {
        let c = LambdaConfig {
            probe_rabi: 0.0,
            control_rabi: 0.0,
            ..cfg()
        };
        let rho = steady_state(&c).unwrap();
        assert_relative_eq!(rho.population(1), 1.0, epsilon = 1e-12);
        assert!(rho
            .rho
            .iter()
            .flatten()
            .enumerate()
            .all(|(k, z)| k == 0 || z.norm() < 1e-12));
    }

    #[test]
    fn dark_state_at_two_photon_resonance() {
        let c = LambdaConfig {
            gamma_21: 0.0,
            probe_omega: 100.03,
            control_omega: 80.03,
            ..cfg()
        };
        let rho = steady_state(&c).unwrap();
        assert!(rho.rho31().norm() < 1e-12, "{}", rho.rho31());
        let theta = c.probe_rabi.atan2(c.control_rabi);
        let d = DensityMatrix3::pure([
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(-theta.sin(), 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        for i in 0..3 {
            for j in 0..3 {
                assert!((rho.rho[i][j] - d.rho[i][j]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn no_dissipation_is_singular() {
        let c = LambdaConfig {
            gamma_31: 0.0,
            gamma_32: 0.0,
            gamma_21: 0.0,
            ..cfg()
        };
        assert!(matches!(
            steady_state(&c),
            Err(LambdaError::SingularSystem { .. })
        ));
    }

    #[test]
    fn undriven_without_metastable_decay_is_singular() {
        // |1> and |2> are both stationary
        let c = LambdaConfig {
            gamma_21: 0.0,
            probe_rabi: 0.0,
            control_rabi: 0.0,
            ..cfg()
        };
        assert!(matches!(
            steady_state(&c),
            Err(LambdaError::SingularSystem { .. })
        ));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let c = LambdaConfig {
            gamma_21: -1.0,
            ..cfg()
        };
        assert!(matches!(
            steady_state(&c),
            Err(LambdaError::InvalidConfig(_))
        ));
        let c = LambdaConfig {
            omega_23: 120.0,
            ..cfg()
        };
        assert!(matches!(
            steady_state(&c),
            Err(LambdaError::InvalidConfig(_))
        ));
    }

    #[test]
    fn residual_is_small() {
        let c = cfg();
        let rho = steady_state(&c).unwrap();
        assert!(steady_state_residual(&c, &rho) < 1e-12);
    }
}
