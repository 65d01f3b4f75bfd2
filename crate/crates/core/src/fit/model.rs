//! EIT and ATS susceptibility models and their transmission mapping.
//!
//! ```text
//! ln S21 = i (ωp L/c)(1 + χs/2) − α0 + i φ0
//! χs_EIT = A+/((ωp − ω+) − iΓ+/2) − A−/((ωp − ω−) − iΓ−/2)
//! χs_ATS = A1/((ωp − ω1) − iΓ1/2) + A2/((ωp − ω2) − iΓ2/2)
//! ```

use serde::{Deserialize, Serialize};

use crate::scalar::{c, Cplx, Real};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ModelKind {
    Eit,
    Ats,
}

impl ModelKind {
    /// Sign applied to the second Lorentzian.
    pub fn second_sign<T: Real>(self) -> T {
        match self {
            ModelKind::Eit => -T::one(),
            ModelKind::Ats => T::one(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Eit => "EIT",
            ModelKind::Ats => "ATS",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Frequency-independent part of the transmission mapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineParams<T> {
    /// Effective travel distance, metres (> 0).
    pub l_eff: T,
    /// Attenuation (dimensionless, natural-log units).
    pub alpha0: T,
    /// Phase offset, radians.
    pub phi0: T,
}

/// One complex Lorentzian `A/((ωp − ω0) − iΓ/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lorentzian<T> {
    pub amplitude: T,
    pub center: T,
    pub width: T,
}

impl<T: Real> Lorentzian<T> {
    #[inline]
    fn denominator(&self, omega_p: T) -> Cplx<T> {
        c(omega_p - self.center, -self.width / T::two())
    }

    pub fn eval(&self, omega_p: T) -> Cplx<T> {
        Cplx::from(self.amplitude) / self.denominator(omega_p)
    }

    /// d/dωp.
    pub fn derivative(&self, omega_p: T) -> Cplx<T> {
        let d = self.denominator(omega_p);
        -Cplx::from(self.amplitude) / (d * d)
    }
}

/// Two-Lorentzian susceptibility with its baseline. `kind` selects whether
/// the second term is subtracted (EIT) or added (ATS).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    pub kind: ModelKind,
    pub first: Lorentzian<T>,
    pub second: Lorentzian<T>,
    pub baseline: BaselineParams<T>,
}

/// EIT parameters in their conventional names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EitModelParams<T> {
    pub a_plus: T,
    pub a_minus: T,
    pub omega_plus: T,
    pub omega_minus: T,
    pub gamma_plus: T,
    pub gamma_minus: T,
    pub baseline: BaselineParams<T>,
}

/// ATS parameters in their conventional names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtsModelParams<T> {
    pub a_1: T,
    pub a_2: T,
    pub omega_1: T,
    pub omega_2: T,
    pub gamma_1: T,
    pub gamma_2: T,
    pub baseline: BaselineParams<T>,
}

impl<T: Real> From<EitModelParams<T>> for ModelParams<T> {
    fn from(p: EitModelParams<T>) -> Self {
        ModelParams {
            kind: ModelKind::Eit,
            first: Lorentzian {
                amplitude: p.a_plus,
                center: p.omega_plus,
                width: p.gamma_plus,
            },
            second: Lorentzian {
                amplitude: p.a_minus,
                center: p.omega_minus,
                width: p.gamma_minus,
            },
            baseline: p.baseline,
        }
    }
}

impl<T: Real> From<AtsModelParams<T>> for ModelParams<T> {
    fn from(p: AtsModelParams<T>) -> Self {
        ModelParams {
            kind: ModelKind::Ats,
            first: Lorentzian {
                amplitude: p.a_1,
                center: p.omega_1,
                width: p.gamma_1,
            },
            second: Lorentzian {
                amplitude: p.a_2,
                center: p.omega_2,
                width: p.gamma_2,
            },
            baseline: p.baseline,
        }
    }
}

impl<T: Real> ModelParams<T> {
    pub fn as_eit(&self) -> Option<EitModelParams<T>> {
        (self.kind == ModelKind::Eit).then_some(EitModelParams {
            a_plus: self.first.amplitude,
            a_minus: self.second.amplitude,
            omega_plus: self.first.center,
            omega_minus: self.second.center,
            gamma_plus: self.first.width,
            gamma_minus: self.second.width,
            baseline: self.baseline,
        })
    }

    pub fn as_ats(&self) -> Option<AtsModelParams<T>> {
        (self.kind == ModelKind::Ats).then_some(AtsModelParams {
            a_1: self.first.amplitude,
            a_2: self.second.amplitude,
            omega_1: self.first.center,
            omega_2: self.second.center,
            gamma_1: self.first.width,
            gamma_2: self.second.width,
            baseline: self.baseline,
        })
    }

    /// Flat parameter vector in the order
    /// `[A1, ω1, Γ1, A2, ω2, Γ2, L_eff, α0, φ0]`.
    pub fn to_vec(&self) -> [T; 9] {
        [
            self.first.amplitude,
            self.first.center,
            self.first.width,
            self.second.amplitude,
            self.second.center,
            self.second.width,
            self.baseline.l_eff,
            self.baseline.alpha0,
            self.baseline.phi0,
        ]
    }

    pub fn from_vec(kind: ModelKind, v: &[T; 9]) -> Self {
        ModelParams {
            kind,
            first: Lorentzian {
                amplitude: v[0],
                center: v[1],
                width: v[2],
            },
            second: Lorentzian {
                amplitude: v[3],
                center: v[4],
                width: v[5],
            },
            baseline: BaselineParams {
                l_eff: v[6],
                alpha0: v[7],
                phi0: v[8],
            },
        }
    }

    pub const PARAM_NAMES: [&'static str; 9] = [
        "amplitude_1",
        "center_1",
        "width_1",
        "amplitude_2",
        "center_2",
        "width_2",
        "l_eff",
        "alpha0",
        "phi0",
    ];

    /// Widths > 0, admissible amplitude signs, L_eff > 0, everything finite.
    pub fn is_valid(&self) -> bool {
        let v = self.to_vec();
        v.iter().all(|x| x.is_finite())
            && self.first.width > T::zero()
            && self.second.width > T::zero()
            && self.amplitudes_admissible()
            && self.baseline.l_eff > T::zero()
    }

    /// EIT amplitudes are non-negative; ATS amplitudes share a sign.
    fn amplitudes_admissible(&self) -> bool {
        let (a, b) = (self.first.amplitude, self.second.amplitude);
        let nonneg = a >= T::zero() && b >= T::zero();
        match self.kind {
            ModelKind::Eit => nonneg,
            ModelKind::Ats => nonneg || (a <= T::zero() && b <= T::zero()),
        }
    }

    /// ATS canonical order: ω1 ≤ ω2, ties broken by amplitude. EIT terms are
    /// distinguished by sign and are returned unchanged.
    pub fn canonical(self) -> Self {
        if self.kind == ModelKind::Ats {
            let swap = self.second.center < self.first.center
                || (self.second.center == self.first.center
                    && self.second.amplitude < self.first.amplitude);
            if swap {
                return ModelParams {
                    first: self.second,
                    second: self.first,
                    ..self
                };
            }
        }
        self
    }
}

/// χs at `omega_p`.
pub fn eval_susceptibility<T: Real>(params: &ModelParams<T>, omega_p: T) -> Cplx<T> {
    params.first.eval(omega_p) + params.second.eval(omega_p) * params.kind.second_sign::<T>()
}

/// dχs/dωp.
pub fn susceptibility_derivative<T: Real>(params: &ModelParams<T>, omega_p: T) -> Cplx<T> {
    params.first.derivative(omega_p)
        + params.second.derivative(omega_p) * params.kind.second_sign::<T>()
}

/// Complex log-transmission for a given susceptibility value.
pub fn ln_s21_from_susceptibility<T: Real>(
    baseline: &BaselineParams<T>,
    omega_p: T,
    chi: Cplx<T>,
) -> Cplx<T> {
    let k = omega_p * baseline.l_eff / T::lit(SPEED_OF_LIGHT);
    let one = Cplx::from(T::one());
    c(T::zero(), k) * (one + chi * T::half()) + c(-baseline.alpha0, baseline.phi0)
}

/// `ln|S21| + iφ` with φ continuous (not reduced modulo 2π).
pub fn eval_ln_s21<T: Real>(params: &ModelParams<T>, omega_p: T) -> Cplx<T> {
    ln_s21_from_susceptibility(
        &params.baseline,
        omega_p,
        eval_susceptibility(params, omega_p),
    )
}

/// Analytic dφ/dωp of the model phase.
pub fn phase_derivative<T: Real>(params: &ModelParams<T>, omega_p: T) -> T {
    let l_over_c = params.baseline.l_eff / T::lit(SPEED_OF_LIGHT);
    let chi = eval_susceptibility(params, omega_p);
    let dchi = susceptibility_derivative(params, omega_p);
    l_over_c * (T::one() + chi.re * T::half()) + omega_p * l_over_c * dchi.re * T::half()
}
