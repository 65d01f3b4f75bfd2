//! Nested polariton levels of a driven qubit dispersively coupled to one
//! cavity mode.
//!
//! The qubit is a two-level system. Restricting to zero and one cavity
//! photons and moving to the frame rotating at the drive frequency (acting on
//! the qubit excitation only) leaves two independent 2×2 blocks:
//!
//! ```text
//! zero-photon  {|g,0>, |e,0>}:  [[0,      Ωd/2       ], [Ωd/2, δ0      ]]
//! one-photon   {|g,1>, |e,1>}:  [[ωr,     Ωd/2       ], [Ωd/2, ωr + δ1 ]]
//! ```
//!
//! with δ0 = (ωq − χ) − ωd and δ1 = ωd − (ωq − 3χ). States are labelled by
//! energy inside each block: |1>,|2> are the lower/upper zero-photon states
//! and |3>,|4> the lower/upper one-photon states.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolaritonError {
    #[error("device parameter `{field}` must be {requirement} (got {value})")]
    InvalidParameter {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("not dispersive: chi/|omega_r - omega_q| = {ratio:.3} (must be < 0.1)")]
    NotDispersive { ratio: f64 },
    #[error("drive strength grid is empty")]
    EmptyGrid,
}

/// Largest χ/|ωr − ωq| accepted as dispersive.
pub const DISPERSIVE_RATIO_LIMIT: f64 = 0.1;

/// Static device frequencies and rates, all angular (rad/s).
///
/// `omega_q` is the bare qubit frequency, so the zero-photon qubit line sits
/// at `omega_q - chi` and the one-photon line at `omega_q - 3 chi`. A measured
/// zero-photon transition is loaded with [`DeviceParams::from_n0_transition`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams<T> {
    pub omega_q: T,
    pub omega_r: T,
    pub chi: T,
    pub gamma_q: T,
    pub gamma_c: T,
    /// Distance between input and output couplers, metres.
    pub line_length_l: T,
    /// Carried for reference only.
    pub coupling_g: T,
    /// Carried for reference only.
    pub anharmonicity_alpha: T,
}

impl<T: Real> DeviceParams<T> {
    /// Builds parameters from the zero-photon qubit transition `omega_q - chi`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_n0_transition(
        omega_ge0: T,
        omega_r: T,
        chi: T,
        gamma_q: T,
        gamma_c: T,
        line_length_l: T,
    ) -> Self {
        Self {
            omega_q: omega_ge0 + chi,
            omega_r,
            chi,
            gamma_q,
            gamma_c,
            line_length_l,
            coupling_g: T::zero(),
            anharmonicity_alpha: T::zero(),
        }
    }

    /// Zero-photon qubit transition ωq − χ.
    pub fn n0_transition(&self) -> T {
        self.omega_q - self.chi
    }

    /// One-photon qubit transition ωq − 3χ.
    pub fn n1_transition(&self) -> T {
        self.omega_q - T::lit(3.0) * self.chi
    }

    pub fn validate(&self) -> Result<(), PolaritonError> {
        let pos = |field, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(PolaritonError::InvalidParameter {
                    field,
                    requirement: "finite and > 0",
                    value: v.to_f64().unwrap_or(f64::NAN),
                })
            }
        };
        pos("omega_q", self.omega_q)?;
        pos("omega_r", self.omega_r)?;
        pos("chi", self.chi)?;
        pos("gamma_c", self.gamma_c)?;
        pos("line_length_l", self.line_length_l)?;
        if !(self.gamma_q >= T::zero()) || !self.gamma_q.is_finite() {
            return Err(PolaritonError::InvalidParameter {
                field: "gamma_q",
                requirement: "finite and >= 0",
                value: self.gamma_q.to_f64().unwrap_or(f64::NAN),
            });
        }
        let ratio = self.chi / (self.omega_r - self.omega_q).abs();
        if !(ratio < T::lit(DISPERSIVE_RATIO_LIMIT)) {
            return Err(PolaritonError::NotDispersive {
                ratio: ratio.to_f64().unwrap_or(f64::INFINITY),
            });
        }
        Ok(())
    }
}

/// Coherent drive that dresses the qubit–cavity ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolaritonDrive<T> {
    pub omega_d: T,
    /// Rabi strength Ωd (rad/s), non-negative.
    pub rabi: T,
}

impl<T: Real> PolaritonDrive<T> {
    pub fn validate(&self) -> Result<(), PolaritonError> {
        if self.rabi >= T::zero() && self.rabi.is_finite() && self.omega_d.is_finite() {
            Ok(())
        } else {
            Err(PolaritonError::InvalidParameter {
                field: "drive.rabi",
                requirement: "finite and >= 0",
                value: self.rabi.to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingAngles<T> {
    pub theta0: T,
    pub theta1: T,
    pub delta0: T,
    pub delta1: T,
    /// Set when a block has neither detuning nor drive, so its angle is a
    /// convention (0) rather than a value.
    pub degenerate: bool,
}

/// Mixing angles of the two photon-number blocks.
///
/// Angles come from the two-argument arctangent of (Ωd, δ) and lie in
/// [0, π]; π is reached only for Ωd = 0 with negative detuning.
pub fn mixing_angles<T: Real>(
    device: &DeviceParams<T>,
    drive: &PolaritonDrive<T>,
) -> MixingAngles<T> {
    let delta0 = device.n0_transition() - drive.omega_d;
    let delta1 = T::two() * device.chi - delta0;
    let degenerate = drive.rabi == T::zero() && (delta0 == T::zero() || delta1 == T::zero());
    MixingAngles {
        theta0: drive.rabi.atan2(delta0),
        theta1: drive.rabi.atan2(delta1),
        delta0,
        delta1,
        degenerate,
    }
}

/// True iff ωq − 3χ < ωd < ωq − χ.
pub fn in_nesting_regime<T: Real>(device: &DeviceParams<T>, omega_d: T) -> bool {
    device.n1_transition() < omega_d && omega_d < device.n0_transition()
}

/// Drive strength (ordinary frequency, MHz) beyond which higher photon
/// numbers leave the nesting regime.
pub const DRIVE_BREAKDOWN_MHZ: f64 = 2.8;

/// Conditions outside the two-block polariton description.
pub fn validity_warnings<T: Real>(
    device: &DeviceParams<T>,
    drive: &PolaritonDrive<T>,
) -> Vec<String> {
    let mut out = Vec::new();
    if !in_nesting_regime(device, drive.omega_d) {
        out.push("drive frequency lies outside the nesting regime".to_string());
    }
    if drive.rabi > crate::units::mhz_2pi(T::lit(DRIVE_BREAKDOWN_MHZ)) {
        out.push(format!(
            "drive Rabi frequency exceeds {DRIVE_BREAKDOWN_MHZ} MHz; photon numbers n >= 2 are not modelled"
        ));
    }
    out
}

/// True iff the control strength is below the cavity decay rate.
pub fn eit_condition<T: Real>(control_rabi: T, device: &DeviceParams<T>) -> bool {
    control_rabi < device.gamma_c
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRates<T> {
    pub gamma_31: T,
    pub gamma_32: T,
    pub gamma_21: T,
}

/// Lab-frame probe frequencies between polariton levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transitions<T> {
    pub omega_13: T,
    pub omega_23: T,
    pub omega_14: T,
    pub omega_24: T,
}

impl<T: Real> Transitions<T> {
    /// ω23 < ω13 < ω24 < ω14.
    pub fn is_nested_order(&self) -> bool {
        self.omega_23 < self.omega_13
            && self.omega_13 < self.omega_24
            && self.omega_24 < self.omega_14
    }
}

/// Two-component amplitude over `{|g,n>, |e,n>}`.
pub type Amplitude<T> = [T; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolaritonSystem<T> {
    pub angles: MixingAngles<T>,
    /// Rotating-frame energies of |1>..|4>.
    pub energies: [T; 4],
    /// Amplitudes of |1>,|2> over `{|g,0>,|e,0>}` and |3>,|4> over `{|g,1>,|e,1>}`.
    pub amplitudes: [Amplitude<T>; 4],
    pub decay_rates: DecayRates<T>,
    pub transitions: Transitions<T>,
    pub in_nesting_regime: bool,
}

fn block_states<T: Real>(theta: T) -> (Amplitude<T>, Amplitude<T>) {
    let h = theta / T::two();
    let (s, c) = h.sin_cos();
    let fix = |v: Amplitude<T>| {
        if v[0] < T::zero() || (v[0] == T::zero() && v[1] < T::zero()) {
            [-v[0], -v[1]]
        } else {
            v
        }
    };
    (fix([c, -s]), fix([s, c]))
}

/// Zero-photon block Hamiltonian over `{|g,0>, |e,0>}`.
pub fn zero_photon_block<T: Real>(angles: &MixingAngles<T>, rabi: T) -> [[T; 2]; 2] {
    [
        [T::zero(), rabi / T::two()],
        [rabi / T::two(), angles.delta0],
    ]
}

/// One-photon block Hamiltonian over `{|g,1>, |e,1>}`.
pub fn one_photon_block<T: Real>(angles: &MixingAngles<T>, rabi: T, omega_r: T) -> [[T; 2]; 2] {
    [
        [omega_r, rabi / T::two()],
        [rabi / T::two(), omega_r + angles.delta1],
    ]
}

/// Engineered decay rates of the Λ legs for the given angles.
pub fn decay_rates<T: Real>(angles: &MixingAngles<T>, gamma_c: T, gamma_q: T) -> DecayRates<T> {
    let half_sum = (angles.theta0 + angles.theta1) / T::two();
    let (s, c) = half_sum.sin_cos();
    let c0 = (angles.theta0 / T::two()).cos();
    DecayRates {
        gamma_31: gamma_c * s * s,
        gamma_32: gamma_c * c * c,
        gamma_21: gamma_q * c0.powi(4),
    }
}

pub fn build_polaritons<T: Real>(
    device: &DeviceParams<T>,
    drive: &PolaritonDrive<T>,
) -> PolaritonSystem<T> {
    let angles = mixing_angles(device, drive);
    let s0 = angles.delta0.hypot(drive.rabi);
    let s1 = angles.delta1.hypot(drive.rabi);
    let e1 = (angles.delta0 - s0) / T::two();
    let e2 = (angles.delta0 + s0) / T::two();
    let e3 = device.omega_r + (angles.delta1 - s1) / T::two();
    let e4 = device.omega_r + (angles.delta1 + s1) / T::two();
    let (a1, a2) = block_states(angles.theta0);
    let (a3, a4) = block_states(angles.theta1);
    PolaritonSystem {
        angles,
        energies: [e1, e2, e3, e4],
        amplitudes: [a1, a2, a3, a4],
        decay_rates: decay_rates(&angles, device.gamma_c, device.gamma_q),
        transitions: Transitions {
            omega_13: e3 - e1,
            omega_23: e3 - e2,
            omega_14: e4 - e1,
            omega_24: e4 - e2,
        },
        in_nesting_regime: in_nesting_regime(device, drive.omega_d),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionRow<T> {
    pub rabi: T,
    pub omega_23: T,
    pub omega_13: T,
    pub omega_24: T,
    pub omega_14: T,
}

/// Four probe transitions for each drive strength in `rabi_grid`.
pub fn transition_curves<T: Real>(
    device: &DeviceParams<T>,
    omega_d: T,
    rabi_grid: &[T],
) -> Result<Vec<TransitionRow<T>>, PolaritonError> {
    if rabi_grid.is_empty() {
        return Err(PolaritonError::EmptyGrid);
    }
    rabi_grid
        .iter()
        .map(|&rabi| {
            let drive = PolaritonDrive { omega_d, rabi };
            drive.validate()?;
            let t = build_polaritons(device, &drive).transitions;
            Ok(TransitionRow {
                rabi,
                omega_23: t.omega_23,
                omega_13: t.omega_13,
                omega_24: t.omega_24,
                omega_14: t.omega_14,
            })
        })
        .collect()
}
