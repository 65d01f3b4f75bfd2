//! Driven three-level Λ system: Hamiltonian, Liouvillian, steady state,
//! synthetic probe spectra and dark-state fidelity.
//!
//! Levels are `|1>` (ground), `|2>` (metastable) and `|3>` (excited). The
//! probe drives 1↔3 and the control drives 2↔3.

mod fidelity;
mod liouvillian;
mod steady;
mod sweep;

pub use fidelity::{
    dark_state_fidelity, dark_state_fidelity_expanded, dark_state_population, fidelity_scan,
    FidelityRow,
};
pub use liouvillian::{build_hamiltonian, build_liouvillian, Liouvillian, Matrix3};
pub use steady::{
    steady_state, steady_state_residual, DensityMatrix3, HERMITIAN_TOL, POSITIVITY_TOL, TRACE_TOL,
};
pub use sweep::{probe_sweep, TransmissionMapping};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polariton::PolaritonSystem;
use crate::scalar::Real;
use crate::units::{mhz_2pi, to_hz};

/// Control strength (ordinary frequency, MHz) above which transparency is
/// lost to states outside the Λ system.
pub const CONTROL_BREAKDOWN_MHZ: f64 = 2.8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LambdaError {
    #[error("invalid Lambda configuration: {0}")]
    InvalidConfig(String),
    #[error("steady-state system is singular (condition estimate {condition_estimate:.3e})")]
    SingularSystem { condition_estimate: f64 },
    #[error(
        "steady state is not a physical density matrix \
         (min eigenvalue {min_eigenvalue:.3e}, hermiticity error {hermiticity_error:.3e}, trace error {trace_error:.3e})"
    )]
    NonPhysical {
        min_eigenvalue: f64,
        hermiticity_error: f64,
        trace_error: f64,
    },
    #[error("dark-state angle undefined: probe and control strengths are both zero")]
    DegenerateAngle,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("at probe frequency {omega_p:.9e} rad/s: {source}")]
    AtFrequency {
        omega_p: f64,
        #[source]
        source: Box<LambdaError>,
    },
}

/// Λ-system drives, detunings and decay channels (all rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaConfig<T> {
    pub omega_13: T,
    pub omega_23: T,
    pub gamma_31: T,
    pub gamma_32: T,
    pub gamma_21: T,
    /// Pure dephasing of coherences involving level 2.
    #[serde(default)]
    pub gamma_phi2: T,
    /// Pure dephasing of coherences involving level 3.
    #[serde(default)]
    pub gamma_phi3: T,
    pub probe_rabi: T,
    pub probe_omega: T,
    pub control_rabi: T,
    pub control_omega: T,
}

impl<T: Real> LambdaConfig<T> {
    /// Λ system of a polariton structure with both fields on resonance.
    pub fn from_polaritons(sys: &PolaritonSystem<T>, probe_rabi: T, control_rabi: T) -> Self {
        Self {
            omega_13: sys.transitions.omega_13,
            omega_23: sys.transitions.omega_23,
            gamma_31: sys.decay_rates.gamma_31,
            gamma_32: sys.decay_rates.gamma_32,
            gamma_21: sys.decay_rates.gamma_21,
            gamma_phi2: T::zero(),
            gamma_phi3: T::zero(),
            probe_rabi,
            probe_omega: sys.transitions.omega_13,
            control_rabi,
            control_omega: sys.transitions.omega_23,
        }
    }

    /// Probe detuning Δp = ωp − ω13.
    pub fn probe_detuning(&self) -> T {
        self.probe_omega - self.omega_13
    }

    /// Control detuning Δc = ωc − ω23.
    pub fn control_detuning(&self) -> T {
        self.control_omega - self.omega_23
    }

    /// Conditions under which the three-level description is known to fail.
    pub fn validity_warnings(&self) -> Vec<String> {
        let limit = mhz_2pi(T::lit(CONTROL_BREAKDOWN_MHZ));
        let mut out = Vec::new();
        if self.control_rabi > limit {
            out.push(format!(
                "control Rabi frequency {} MHz exceeds {CONTROL_BREAKDOWN_MHZ} MHz; the Λ model ignores the level breakdown there",
                to_hz(self.control_rabi) / T::lit(1e6)
            ));
        }
        out
    }

    /// Same configuration with probe and control strengths exchanged.
    pub fn role_swapped(&self) -> Self {
        Self {
            probe_rabi: self.control_rabi,
            control_rabi: self.probe_rabi,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<(), LambdaError> {
        let rates = [
            ("gamma_31", self.gamma_31),
            ("gamma_32", self.gamma_32),
            ("gamma_21", self.gamma_21),
            ("gamma_phi2", self.gamma_phi2),
            ("gamma_phi3", self.gamma_phi3),
        ];
        for (name, v) in rates {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(LambdaError::InvalidConfig(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("probe_rabi", self.probe_rabi),
            ("control_rabi", self.control_rabi),
        ] {
            if !(v >= T::zero()) {
                return Err(LambdaError::InvalidConfig(format!(
                    "{name} must be >= 0, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("probe_rabi", self.probe_rabi),
            ("control_rabi", self.control_rabi),
            ("probe_omega", self.probe_omega),
            ("control_omega", self.control_omega),
        ] {
            if !v.is_finite() {
                return Err(LambdaError::InvalidConfig(format!("{name} must be finite")));
            }
        }
        if !(self.omega_13 > self.omega_23) {
            return Err(LambdaError::InvalidConfig(format!(
                "omega_13 ({}) must exceed omega_23 ({})",
                self.omega_13, self.omega_23
            )));
        }
        Ok(())
    }
}
