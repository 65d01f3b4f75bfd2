//! Complex transmission fits, model discrimination and group delay.

mod aic;
mod delay;
mod fitter;
pub mod lm;
pub mod model;

pub use aic::{aic_value, aic_weights, AicCorrection, AicEntry, AicReport};
pub use delay::{group_delay, group_velocity};
pub use fitter::{fit_model, fit_model_from, FitOptions, FitResult, FREE_PARAMETERS};
pub use model::{
    eval_ln_s21, eval_susceptibility, AtsModelParams, BaselineParams, EitModelParams, Lorentzian,
    ModelKind, ModelParams, SPEED_OF_LIGHT,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("fit did not converge (best RSS {:.6e} after {} iterations)", .0.rss, .0.iterations)]
    NonConvergence(Box<FitResult<f64>>),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("{points} points cannot constrain the model (need at least {required})")]
    InsufficientData { points: usize, required: usize },
    #[error("fit results are not comparable: {0}")]
    MismatchedData(String),
    #[error("group delay is zero; group velocity undefined")]
    ZeroDelay,
    #[error("invalid fit options: {0}")]
    InvalidOptions(String),
}

impl FitError {
    /// Best-so-far result carried by [`FitError::NonConvergence`].
    pub fn best_so_far(&self) -> Option<&FitResult<f64>> {
        match self {
            FitError::NonConvergence(r) => Some(r),
            _ => None,
        }
    }
}

/// Accepts a non-converged fit as its best-so-far result; other errors pass
/// through. Model comparison uses this so that a model which cannot describe
/// the data still contributes its (large) residual.
pub fn accept_best_effort(
    result: Result<FitResult<f64>, FitError>,
) -> Result<FitResult<f64>, FitError> {
    match result {
        Err(FitError::NonConvergence(r)) => Ok(*r),
        other => other,
    }
}
