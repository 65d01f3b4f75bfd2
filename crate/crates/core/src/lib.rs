//! Desk-scale reproduction of polariton-based electromagnetically induced
//! transparency in circuit QED.
//!
//! * [`polariton`] builds the drive-dressed qubit–cavity levels, their decay
//!   rates and probe transition frequencies.
//! * [`lambda`] solves the driven Λ-system master equation to steady state and
//!   produces synthetic transmission spectra and dark-state fidelities.
//! * [`fit`] fits complex spectra to EIT and ATS susceptibility models,
//!   weighs them by AIC and extracts group delay.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`, which is what every accuracy
//! target assumes.

// NaN must fail validity checks; matrix code indexes by row and column
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod fit;
pub mod lambda;
pub mod linalg;
pub mod polariton;
pub mod scalar;
pub mod spectrum;
pub mod synth;
pub mod units;

pub use scalar::{Cplx, Real};

pub type DeviceParams = polariton::DeviceParams<f64>;
pub type PolaritonDrive = polariton::PolaritonDrive<f64>;
pub type MixingAngles = polariton::MixingAngles<f64>;
pub type PolaritonSystem = polariton::PolaritonSystem<f64>;
pub type DecayRates = polariton::DecayRates<f64>;
pub type Transitions = polariton::Transitions<f64>;
pub type TransitionRow = polariton::TransitionRow<f64>;

pub type LambdaConfig = lambda::LambdaConfig<f64>;
pub type DensityMatrix3 = lambda::DensityMatrix3<f64>;
pub type TransmissionMapping = lambda::TransmissionMapping<f64>;
pub type FidelityRow = lambda::FidelityRow<f64>;

pub type SpectrumPoint = spectrum::SpectrumPoint<f64>;
pub type ComplexSpectrum = spectrum::ComplexSpectrum<f64>;

pub type BaselineParams = fit::BaselineParams<f64>;
pub type EitModelParams = fit::EitModelParams<f64>;
pub type AtsModelParams = fit::AtsModelParams<f64>;
pub type ModelParams = fit::ModelParams<f64>;
pub type FitOptions = fit::FitOptions<f64>;
pub type FitResult = fit::FitResult<f64>;
pub type AicReport = fit::AicReport<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type DeviceParams = crate::polariton::DeviceParams<f32>;
    pub type PolaritonDrive = crate::polariton::PolaritonDrive<f32>;
    pub type PolaritonSystem = crate::polariton::PolaritonSystem<f32>;
    pub type LambdaConfig = crate::lambda::LambdaConfig<f32>;
    pub type DensityMatrix3 = crate::lambda::DensityMatrix3<f32>;
    pub type ModelParams = crate::fit::ModelParams<f32>;
}
