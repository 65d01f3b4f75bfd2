//! Akaike weights for competing least-squares fits.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

use super::model::ModelKind;
use super::{FitError, FitResult};

/// Optional small-sample correction term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AicCorrection {
    #[default]
    None,
    /// AICc: adds `2k(k + 1)/(n − k − 1)`.
    Small,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AicEntry<T> {
    pub kind: ModelKind,
    pub rss: T,
    pub n: usize,
    pub k: usize,
    pub aic: T,
    pub delta_aic: T,
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AicReport<T> {
    pub correction: AicCorrection,
    pub entries: Vec<AicEntry<T>>,
}

impl<T: Real> AicReport<T> {
    pub fn weight_of(&self, kind: ModelKind) -> Option<T> {
        self.entries
            .iter()
            .find(|e| e.kind == kind)
            .map(|e| e.weight)
    }
}

/// Least-squares AIC `n ln(RSS/n) + 2k`.
pub fn aic_value<T: Real>(rss: T, n: usize, k: usize, correction: AicCorrection) -> T {
    let nf = T::from_usize_lossy(n);
    let kf = T::from_usize_lossy(k);
    // an exact fit would otherwise give -inf
    let rss = rss.max(T::min_positive_value());
    let mut aic = nf * (rss / nf).ln() + T::two() * kf;
    if correction == AicCorrection::Small {
        aic += T::two() * kf * (kf + T::one()) / (nf - kf - T::one());
    }
    aic
}

/// Akaike weights `exp(−Δi/2) / Σj exp(−Δj/2)`.
pub fn aic_weights<T: Real>(
    results: &[FitResult<T>],
    correction: AicCorrection,
) -> Result<AicReport<T>, FitError> {
    let first = results
        .first()
        .ok_or(FitError::MismatchedData("no fit results".into()))?;
    if let Some(r) = results.iter().find(|r| r.n != first.n) {
        return Err(FitError::MismatchedData(format!(
            "residual counts differ: {} has n = {}, {} has n = {}",
            first.kind, first.n, r.kind, r.n
        )));
    }
    if correction == AicCorrection::Small && results.iter().any(|r| r.n <= r.k + 1) {
        return Err(FitError::MismatchedData("AICc needs n > k + 1".into()));
    }
    let aics: Vec<T> = results
        .iter()
        .map(|r| aic_value(r.rss, r.n, r.k, correction))
        .collect();
    let min = aics.iter().fold(T::infinity(), |m, &a| m.min(a));
    let rel: Vec<T> = aics
        .iter()
        .map(|&a| (-(a - min) / T::two()).exp())
        .collect();
    let total = rel.iter().fold(T::zero(), |s, &v| s + v);
    let entries = results
        .iter()
        .zip(aics.iter().zip(&rel))
        .map(|(r, (&aic, &w))| AicEntry {
            kind: r.kind,
            rss: r.rss,
            n: r.n,
            k: r.k,
            aic,
            delta_aic: aic - min,
            weight: w / total,
        })
        .collect();
    Ok(AicReport {
        correction,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::model::{BaselineParams, Lorentzian, ModelParams};
    use approx::assert_relative_eq;

    fn result(kind: ModelKind, rss: f64, n: usize) -> FitResult<f64> {
        let l = Lorentzian {
            amplitude: 1.0,
            center: 0.0,
            width: 1.0,
        };
        FitResult {
            kind,
            params: ModelParams {
                kind,
                first: l,
                second: l,
                baseline: BaselineParams {
                    l_eff: 1.0,
                    alpha0: 0.0,
                    phi0: 0.0,
                },
            },
            rss,
            n,
            k: 9,
            covariance: None,
            iterations: 1,
            gradient_norm: 0.0,
            converged: true,
        }
    }

    #[test]
    fn equal_fits_share_weight() {
        let r = aic_weights(
            &[
                result(ModelKind::Eit, 2.0, 100),
                result(ModelKind::Ats, 2.0, 100),
            ],
            AicCorrection::None,
        )
        .unwrap();
        assert_eq!(r.entries[0].weight, 0.5);
        assert_eq!(r.entries[1].weight, 0.5);
    }

    #[test]
    fn delta_two_gives_textbook_weights() {
        // n ln(RSS/n) differs by exactly 2 when RSS ratio is e^(2/n)
        let n = 100;
        let rss_b = 1.0 * (2.0 / n as f64).exp();
        let r = aic_weights(
            &[
                result(ModelKind::Eit, 1.0, n),
                result(ModelKind::Ats, rss_b, n),
            ],
            AicCorrection::None,
        )
        .unwrap();
        assert_relative_eq!(r.entries[1].delta_aic, 2.0, epsilon = 1e-12);
        assert_relative_eq!(
            r.weight_of(ModelKind::Eit).unwrap(),
            1.0 / (1.0 + (-1.0f64).exp()),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            r.weight_of(ModelKind::Ats).unwrap(),
            0.268_941_421_369_995_1,
            epsilon = 1e-12
        );
    }

    #[test]
    fn mismatched_n_is_rejected() {
        let e = aic_weights(
            &[
                result(ModelKind::Eit, 1.0, 100),
                result(ModelKind::Ats, 1.0, 102),
            ],
            AicCorrection::None,
        );
        assert!(matches!(e, Err(FitError::MismatchedData(_))));
        assert!(aic_weights::<f64>(&[], AicCorrection::None).is_err());
    }

    #[test]
    fn small_sample_correction_adds_penalty() {
        let plain = aic_value(1.0, 40, 9, AicCorrection::None);
        let corrected = aic_value(1.0, 40, 9, AicCorrection::Small);
        assert_relative_eq!(corrected - plain, 2.0 * 9.0 * 10.0 / 30.0, epsilon = 1e-12);
    }
}
