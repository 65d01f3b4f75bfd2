//! Simultaneous `ln|S21|` / phase fits of the EIT and ATS models.
//!
//! Internally the fit runs on dimensionless coordinates: frequencies are
//! measured from the middle of the sweep in units of its half-span, the path
//! length relative to its seed, and the phase offset is replaced by the phase
//! at the reference frequency. That last substitution removes the strong
//! correlation between `L_eff` and `φ0` without changing the model.

use serde::{Deserialize, Serialize};

use crate::scalar::{c, Cplx, Real};
use crate::spectrum::ComplexSpectrum;

use super::lm::{minimize, Evaluation, LmSettings};
use super::model::{ModelKind, ModelParams, SPEED_OF_LIGHT};
use super::FitError;

/// Number of free parameters of either model.
pub const FREE_PARAMETERS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions<T> {
    /// Weight of the phase residuals relative to `ln|S21|` residuals.
    pub phase_weight: T,
    pub max_iterations: usize,
    pub rss_rel_tol: T,
    pub gradient_tol: T,
    /// Seed for the effective path length; estimated from the phase slope
    /// when absent.
    pub l_eff_guess: Option<T>,
    /// Number of full-model starts (at least 1).
    pub starts: usize,
}

impl<T: Real> Default for FitOptions<T> {
    fn default() -> Self {
        Self {
            phase_weight: T::one(),
            max_iterations: 400,
            rss_rel_tol: T::lit(1e-10),
            gradient_tol: T::lit(1e-8),
            l_eff_guess: None,
            starts: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult<T> {
    pub kind: ModelKind,
    pub params: ModelParams<T>,
    /// Residual sum of squares over the stacked `(ln|S21|, φ)` residuals.
    pub rss: T,
    /// Number of scalar residuals (twice the number of points).
    pub n: usize,
    /// Number of free parameters.
    pub k: usize,
    /// Covariance in [`ModelParams::to_vec`] order, row-major 9×9; absent
    /// when the normal matrix is singular.
    pub covariance: Option<Vec<T>>,
    pub iterations: usize,
    pub gradient_norm: T,
    pub converged: bool,
}

impl<T: Real> FitResult<T> {
    /// One-sigma standard errors from the covariance diagonal.
    pub fn std_errors(&self) -> Option<[T; 9]> {
        let cov = self.covariance.as_ref()?;
        let mut out = [T::zero(); 9];
        for (i, o) in out.iter_mut().enumerate() {
            let v = cov[i * 9 + i];
            if !(v >= T::zero()) {
                return None;
            }
            *o = v.sqrt();
        }
        Some(out)
    }
}

/// Dimensionless problem description shared by all starts.
struct Problem<T> {
    kind: ModelKind,
    /// Common sign of both ATS amplitudes; `+1` for EIT.
    polarity: T,
    x: Vec<T>,
    y_mag: Vec<T>,
    y_phase: Vec<T>,
    omega_ref: T,
    half_span: T,
    l_ref: T,
    /// ωref·Lref/c
    k0: T,
    /// half_span·Lref/c
    k1: T,
    phase_weight: T,
}

impl<T: Real> Problem<T> {
    fn new(
        spectrum: &ComplexSpectrum<T>,
        kind: ModelKind,
        polarity: T,
        l_ref: T,
        phase_weight: T,
    ) -> Self {
        let w = spectrum.omegas();
        let lo = w[0];
        let hi = w[w.len() - 1];
        let omega_ref = (lo + hi) / T::two();
        let half_span = (hi - lo) / T::two();
        let c0 = T::lit(SPEED_OF_LIGHT);
        Self {
            kind,
            polarity,
            x: w.iter().map(|&v| (v - omega_ref) / half_span).collect(),
            y_mag: spectrum.ln_magnitudes(),
            y_phase: spectrum.phases(),
            omega_ref,
            half_span,
            l_ref,
            k0: omega_ref * l_ref / c0,
            k1: half_span * l_ref / c0,
            phase_weight,
        }
    }

    /// Signs applied to the two internal (non-negative) amplitudes.
    fn signs(&self) -> (T, T) {
        (self.polarity, self.polarity * self.kind.second_sign::<T>())
    }

    /// Model `ln S21` at sample `i` for internal parameters `q`.
    fn model(&self, q: &[T], i: usize) -> Cplx<T> {
        let x = self.x[i];
        let chi = self.chi(q, x);
        let k = q[6] * (self.k0 + self.k1 * x);
        c(
            -q[7] - k * chi.im * T::half(),
            q[6] * self.k1 * x + k * chi.re * T::half() + q[8],
        )
    }

    fn chi(&self, q: &[T], x: T) -> Cplx<T> {
        let term = |a: T, w: T, g: T| Cplx::from(a) / c(x - w, -g * T::half());
        let (s1, s2) = self.signs();
        term(q[0], q[1], q[2]) * s1 + term(q[3], q[4], q[5]) * s2
    }

    fn evaluate(&self, q: &[T]) -> Evaluation<T> {
        let n = self.x.len();
        let mut residuals = vec![T::zero(); 2 * n];
        let mut jacobian = vec![T::zero(); 2 * n * 9];
        let half = T::half();
        let i_unit = c(T::zero(), T::one());
        for i in 0..n {
            let x = self.x[i];
            let kx = self.k0 + self.k1 * x;
            let k = q[6] * kx;
            let pre = i_unit * (k * half);
            let mut d = [Cplx::from(T::zero()); 9];
            let mut chi = Cplx::from(T::zero());
            let (s1, s2) = self.signs();
            for (t, sign) in [(0usize, s1), (3, s2)] {
                let den = c(x - q[t + 1], -q[t + 2] * half);
                let inv = den.inv();
                let inv2 = inv * inv;
                chi += inv * (q[t] * sign);
                d[t] = pre * inv * sign;
                d[t + 1] = pre * inv2 * (q[t] * sign);
                d[t + 2] = pre * inv2 * i_unit * (q[t] * sign * half);
            }
            d[6] = i_unit * (self.k1 * x) + i_unit * chi * (kx * half);
            d[7] = Cplx::from(-T::one());
            d[8] = i_unit;
            let m = c(
                -q[7] - k * chi.im * half,
                q[6] * self.k1 * x + k * chi.re * half + q[8],
            );
            residuals[i] = self.y_mag[i] - m.re;
            residuals[n + i] = self.phase_weight * (self.y_phase[i] - m.im);
            for j in 0..9 {
                jacobian[i * 9 + j] = -d[j].re;
                jacobian[(n + i) * 9 + j] = -self.phase_weight * d[j].im;
            }
        }
        Evaluation {
            residuals,
            jacobian,
        }
    }

    fn to_internal(&self, p: &ModelParams<T>) -> [T; 9] {
        let s = self.half_span;
        let v = p.to_vec();
        let q6 = v[6] / self.l_ref;
        [
            v[0] / s * self.polarity,
            (v[1] - self.omega_ref) / s,
            v[2] / s,
            v[3] / s * self.polarity,
            (v[4] - self.omega_ref) / s,
            v[5] / s,
            q6,
            v[7],
            v[8] + self.k0 * q6,
        ]
    }

    fn to_natural(&self, q: &[T]) -> ModelParams<T> {
        let s = self.half_span;
        ModelParams::from_vec(
            self.kind,
            &[
                q[0] * s * self.polarity,
                self.omega_ref + q[1] * s,
                q[2] * s,
                q[3] * s * self.polarity,
                self.omega_ref + q[4] * s,
                q[5] * s,
                q[6] * self.l_ref,
                q[7],
                q[8] - self.k0 * q[6],
            ],
        )
    }

    /// Covariance of the natural parameters from the internal `JᵀJ`.
    fn natural_covariance(&self, jtj: &[T], sigma2: T) -> Option<Vec<T>> {
        let inv = crate::linalg::spd_inverse(jtj, 9)?;
        // p = G q + b
        let mut g = [[T::zero(); 9]; 9];
        for (j, row) in g.iter_mut().enumerate().take(6) {
            row[j] = self.half_span;
        }
        g[0][0] = self.half_span * self.polarity;
        g[3][3] = self.half_span * self.polarity;
        g[6][6] = self.l_ref;
        g[7][7] = T::one();
        g[8][8] = T::one();
        g[8][6] = -self.k0;
        let mut out = vec![T::zero(); 81];
        for a in 0..9 {
            for b in 0..9 {
                let mut s = T::zero();
                for i in 0..9 {
                    if g[a][i] == T::zero() {
                        continue;
                    }
                    for j in 0..9 {
                        if g[b][j] != T::zero() {
                            s += g[a][i] * inv[i * 9 + j] * g[b][j];
                        }
                    }
                }
                out[a * 9 + b] = s * sigma2;
            }
        }
        Some(out)
    }

    fn bounds(&self) -> ([T; 9], [T; 9]) {
        let inf = T::infinity();
        let wmin = T::lit(1e-9);
        (
            [
                T::zero(),
                -inf,
                wmin,
                T::zero(),
                -inf,
                wmin,
                T::lit(1e-9),
                -inf,
                -inf,
            ],
            [inf; 9],
        )
    }
}

/// Residual features tried as seeds for the second line.
const SECOND_LINE_CANDIDATES: usize = 3;

/// Iterations spent screening each seed before the full starts are chosen.
const SCREEN_ITERATIONS: usize = 30;

/// Extracted single-line seed, in internal units.
#[derive(Debug, Clone, Copy)]
struct Bump<T> {
    center: T,
    width: T,
    height: T,
}

fn moving_average<T: Real>(y: &[T], half: usize) -> Vec<T> {
    let n = y.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            y[lo..hi].iter().fold(T::zero(), |s, &v| s + v) / T::from_usize_lossy(hi - lo)
        })
        .collect()
}

/// Largest positive bump of `f` with its half-height full width.
fn largest_bump<T: Real>(x: &[T], f: &[T]) -> Option<Bump<T>> {
    largest_bumps(x, f, 1).into_iter().next()
}

/// Up to `count` positive bumps of `f` in decreasing height, each outside
/// the half-height span of the ones already taken.
fn largest_bumps<T: Real>(x: &[T], f: &[T], count: usize) -> Vec<Bump<T>> {
    let mut order: Vec<usize> = (0..f.len()).filter(|&i| f[i] > T::zero()).collect();
    order.sort_by(|&a, &b| f[b].partial_cmp(&f[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<Bump<T>> = Vec::new();
    for i in order {
        if out.len() == count {
            break;
        }
        if out.iter().any(|b| (x[i] - b.center).abs() <= b.width) {
            continue;
        }
        out.push(bump_at(x, f, i));
    }
    out
}

/// Bump spanning every point of `f` above half of `height`, for features made
/// of several nearby extrema.
fn envelope_bump<T: Real>(x: &[T], f: &[T], height: T) -> Bump<T> {
    let half = height / T::two();
    let first = f.iter().position(|&v| v > half).unwrap_or(0);
    let last = f.iter().rposition(|&v| v > half).unwrap_or(f.len() - 1);
    let min_width = (x[x.len() - 1] - x[0]) / T::from_usize_lossy(x.len());
    Bump {
        center: (x[first] + x[last]) / T::two(),
        width: (x[last] - x[first]).max(min_width),
        height,
    }
}

fn bump_at<T: Real>(x: &[T], f: &[T], imax: usize) -> Bump<T> {
    let h = f[imax];
    let half = h / T::two();
    let cross = |range: &mut dyn Iterator<Item = usize>, step_back: isize| -> Option<T> {
        for i in range {
            if f[i] <= half {
                let j = (i as isize + step_back) as usize;
                let t = (f[j] - half) / (f[j] - f[i]);
                return Some(x[j] + (x[i] - x[j]) * t);
            }
        }
        None
    };
    let left = cross(&mut (0..imax).rev(), 1);
    let right = cross(&mut (imax + 1..f.len()), -1);
    let center = x[imax];
    let width = match (left, right) {
        (Some(l), Some(r)) => r - l,
        (Some(l), None) => T::two() * (center - l),
        (None, Some(r)) => T::two() * (r - center),
        (None, None) => x[x.len() - 1] - x[0],
    };
    let min_width = (x[x.len() - 1] - x[0]) / T::from_usize_lossy(x.len());
    Bump {
        center,
        width: width.max(min_width),
        height: h,
    }
}

/// Line-shape seed for one Lorentzian producing a bump of the given sign
/// (`+1` peak, `-1` dip) in `ln|S21|`.
fn seed_from_bump<T: Real>(b: &Bump<T>, k0: T) -> [T; 3] {
    // a peak of height h with FWHM g needs amplitude h·g/k
    [b.height * b.width / k0, b.center, b.width]
}

fn median<T: Real>(v: &mut [T]) -> T {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / T::two()
    }
}

/// Least-squares line through `(x, y)`: returns `(slope, intercept)`.
fn line_fit<T: Real>(x: &[T], y: &[T]) -> (T, T) {
    let n = T::from_usize_lossy(x.len());
    let mx = x.iter().fold(T::zero(), |s, &v| s + v) / n;
    let my = y.iter().fold(T::zero(), |s, &v| s + v) / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    let slope = if sxx > T::zero() {
        sxy / sxx
    } else {
        T::zero()
    };
    (slope, my - slope * mx)
}

fn edge_indices(n: usize) -> Vec<usize> {
    let e = (n / 10).max(3).min(n / 2);
    (0..e).chain(n - e..n).collect()
}

/// Rough path-length estimate from the phase slope of the sweep edges.
fn estimate_l_eff<T: Real>(spectrum: &ComplexSpectrum<T>) -> T {
    let w = spectrum.omegas();
    let ph = spectrum.phases();
    let idx = edge_indices(w.len());
    let ex: Vec<T> = idx.iter().map(|&i| w[i]).collect();
    let ey: Vec<T> = idx.iter().map(|&i| ph[i]).collect();
    let (slope, _) = line_fit(&ex, &ey);
    let l = slope * T::lit(SPEED_OF_LIGHT);
    if l.is_finite() && l > T::zero() {
        l
    } else {
        T::one()
    }
}

struct Attempt<T> {
    q: Vec<T>,
    rss: T,
    iterations: usize,
    gradient_norm: T,
    converged: bool,
    jtj: Vec<T>,
}

fn run<T: Real>(
    prob: &Problem<T>,
    start: &[T; 9],
    free: &[bool; 9],
    settings: &LmSettings<T>,
) -> Attempt<T> {
    let (lo, hi) = prob.bounds();
    let out = minimize(|q: &[T]| prob.evaluate(q), start, free, &lo, &hi, settings);
    Attempt {
        q: out.params,
        rss: out.rss,
        iterations: out.iterations,
        gradient_norm: out.gradient_norm,
        converged: out.converged,
        jtj: out.jtj,
    }
}

/// Smoothed `ln|S21|` residual of the current internal parameters.
fn smoothed_mag_residual<T: Real>(prob: &Problem<T>, q: &[T], half: usize) -> Vec<T> {
    let r: Vec<T> = (0..prob.x.len())
        .map(|i| prob.y_mag[i] - prob.model(q, i).re)
        .collect();
    moving_average(&r, half)
}

fn negate<T: Real>(v: &[T]) -> Vec<T> {
    v.iter().map(|&a| -a).collect()
}

/// Seeds for the full model built from the data.
///
/// A single line is fitted first to the dominant feature, then the other
/// Lorentzian is placed on the largest remaining feature it can represent.
/// EIT tries both orders (peak term first and dip term first).
fn structured_seeds<T: Real>(
    prob: &Problem<T>,
    base: [T; 9],
    settings: &LmSettings<T>,
) -> Result<Vec<[T; 9]>, FitError> {
    let n = prob.x.len();
    let half = (n / 80).max(1);
    let dev: Vec<T> = (0..n)
        .map(|i| prob.y_mag[i] - prob.model(&base, i).re)
        .collect();
    let dev = moving_average(&dev, half);
    let k0 = prob.k0 * base[6];

    // slot 0 holds the first term, slot 3 the second; each yields a peak
    // in ln|S21| when its sign is negative
    let (s1, s2) = prob.signs();
    let is_peak = |slot: usize| {
        if slot == 0 {
            s1 < T::zero()
        } else {
            s2 < T::zero()
        }
    };
    let orders: Vec<usize> = match prob.kind {
        ModelKind::Eit => vec![3, 0],
        ModelKind::Ats => vec![0],
    };
    let mut seeds = Vec::new();
    for first_slot in orders {
        let target = if is_peak(first_slot) {
            dev.clone()
        } else {
            negate(&dev)
        };
        let Some(b1) = largest_bump(&prob.x, &target) else {
            continue;
        };
        let mut firsts = vec![b1];
        let env = envelope_bump(&prob.x, &target, b1.height);
        if (env.width - b1.width).abs() > b1.width / T::two() {
            firsts.push(env);
        }
        for b1 in firsts {
            let mut q = base;
            q[first_slot..first_slot + 3].copy_from_slice(&seed_from_bump(&b1, k0));
            let mut free = [false; 9];
            free[first_slot..first_slot + 3]
                .iter_mut()
                .for_each(|f| *f = true);
            free[6..9].iter_mut().for_each(|f| *f = true);
            let stage1 = run(prob, &q, &free, settings);
            let mut q1 = [T::zero(); 9];
            q1.copy_from_slice(&stage1.q);

            let other = if first_slot == 0 { 3 } else { 0 };
            let res = smoothed_mag_residual(prob, &q1, half);
            let target = if is_peak(other) { res } else { negate(&res) };
            let mut second = largest_bumps(&prob.x, &target, SECOND_LINE_CANDIDATES);
            if second.is_empty() {
                second.push(Bump {
                    center: q1[first_slot + 1],
                    width: q1[first_slot + 2] / T::two(),
                    height: T::lit(1e-3) * b1.height,
                });
            }
            for b2 in &second {
                let s2 = seed_from_bump(b2, k0);
                let mut full = q1;
                full[other..other + 3].copy_from_slice(&s2);
                seeds.push(full);
                // narrower second line
                let mut narrow = full;
                narrow[other + 2] = s2[2] / T::two();
                narrow[other] = s2[0] / T::two();
                seeds.push(narrow);
            }
            let s2 = seed_from_bump(&second[0], k0);
            let mut full = q1;
            full[other..other + 3].copy_from_slice(&s2);
            if prob.kind == ModelKind::Ats {
                // symmetric split of the single fitted line
                let (w, g) = (q1[first_slot + 1], q1[first_slot + 2]);
                let mut split = q1;
                split[0] = q1[first_slot] / T::two();
                split[1] = w - g / T::lit(4.0);
                split[2] = g / T::two();
                split[3] = q1[first_slot] / T::two();
                split[4] = w + g / T::lit(4.0);
                split[5] = g / T::two();
                seeds.push(split);
                let mut wide = full;
                wide[other + 2] = s2[2] * T::two();
                seeds.push(wide);
            }
        }
    }
    if seeds.is_empty() {
        return Err(FitError::DegenerateData(
            "no spectral feature found to seed the line shapes".into(),
        ));
    }
    Ok(seeds)
}

fn check_input<T: Real>(spectrum: &ComplexSpectrum<T>) -> Result<(), FitError> {
    let n = spectrum.len();
    if n < 3 * FREE_PARAMETERS {
        return Err(FitError::InsufficientData {
            points: n,
            required: 3 * FREE_PARAMETERS,
        });
    }
    let mags = spectrum.ln_magnitudes();
    let first = mags[0];
    if mags.iter().all(|&m| m == first) {
        return Err(FitError::DegenerateData("ln|S21| is exactly flat".into()));
    }
    Ok(())
}

fn baseline_seed<T: Real>(prob: &Problem<T>) -> [T; 9] {
    let n = prob.x.len();
    let idx = edge_indices(n);
    let mut mags: Vec<T> = idx.iter().map(|&i| prob.y_mag[i]).collect();
    let alpha0 = -median(&mut mags);
    // phase at the reference from the edges, after removing the seeded
    // propagation slope
    let resid: Vec<T> = idx
        .iter()
        .map(|&i| prob.y_phase[i] - prob.k1 * prob.x[i])
        .collect();
    let ex: Vec<T> = idx.iter().map(|&i| prob.x[i]).collect();
    let (_, psi) = line_fit(&ex, &resid);
    let tiny = T::lit(1e-3);
    [
        T::zero(),
        T::zero(),
        tiny,
        T::zero(),
        T::zero(),
        tiny,
        T::one(),
        alpha0,
        psi,
    ]
}

fn finish<T: Real>(prob: &Problem<T>, best: Attempt<T>) -> Result<FitResult<T>, FitError> {
    let n = 2 * prob.x.len();
    let params = prob.to_natural(&best.q).canonical();
    let sigma2 = best.rss / T::from_usize_lossy(n - FREE_PARAMETERS);
    let covariance = prob.natural_covariance(&best.jtj, sigma2).map(|cov| {
        if params.kind == ModelKind::Ats && params != prob.to_natural(&best.q) {
            swap_ats_covariance(&cov)
        } else {
            cov
        }
    });
    let result = FitResult {
        kind: prob.kind,
        params,
        rss: best.rss,
        n,
        k: FREE_PARAMETERS,
        covariance,
        iterations: best.iterations,
        gradient_norm: best.gradient_norm,
        converged: best.converged,
    };
    if result.converged {
        Ok(result)
    } else {
        Err(FitError::NonConvergence(Box::new(
            result.into_f64_summary(),
        )))
    }
}

fn swap_ats_covariance<T: Real>(cov: &[T]) -> Vec<T> {
    let perm = [3usize, 4, 5, 0, 1, 2, 6, 7, 8];
    let mut out = vec![T::zero(); 81];
    for a in 0..9 {
        for b in 0..9 {
            out[a * 9 + b] = cov[perm[a] * 9 + perm[b]];
        }
    }
    out
}

impl<T: Real> FitResult<T> {
    pub(crate) fn into_f64_summary(self) -> FitResult<f64> {
        let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
        let p = self.params.to_vec().map(f);
        FitResult {
            kind: self.kind,
            params: ModelParams::from_vec(self.kind, &p),
            rss: f(self.rss),
            n: self.n,
            k: self.k,
            covariance: self.covariance.map(|c| c.into_iter().map(f).collect()),
            iterations: self.iterations,
            gradient_norm: f(self.gradient_norm),
            converged: self.converged,
        }
    }
}

fn settings_from<T: Real>(opts: &FitOptions<T>) -> LmSettings<T> {
    LmSettings {
        max_iterations: opts.max_iterations,
        rss_rel_tol: opts.rss_rel_tol,
        gradient_tol: opts.gradient_tol,
        ..LmSettings::default()
    }
}

/// Fits `kind` to a spectrum whose phase is already unwrapped.
///
/// Every data-driven seed gets a short screening run; the `options.starts`
/// best are then refined to convergence and the lowest residual is kept.
pub fn fit_model<T: Real>(
    spectrum: &ComplexSpectrum<T>,
    kind: ModelKind,
    options: &FitOptions<T>,
) -> Result<FitResult<T>, FitError> {
    check_input(spectrum)?;
    let l_ref = options
        .l_eff_guess
        .unwrap_or_else(|| estimate_l_eff(spectrum));
    if !(l_ref > T::zero()) {
        return Err(FitError::InvalidOptions("l_eff_guess must be > 0".into()));
    }
    // ATS lines share a sign that the data decide: two dips or two peaks
    let polarities: &[T] = match kind {
        ModelKind::Eit => &[T::one()],
        ModelKind::Ats => &[T::one(), -T::one()],
    };
    let probs: Vec<Problem<T>> = polarities
        .iter()
        .map(|&s| Problem::new(spectrum, kind, s, l_ref, options.phase_weight))
        .collect();
    let settings = settings_from(options);
    let free = [true; 9];
    let screen = LmSettings {
        max_iterations: SCREEN_ITERATIONS,
        ..settings
    };
    let mut screened: Vec<(usize, Attempt<T>)> = Vec::new();
    for (k, prob) in probs.iter().enumerate() {
        let base = baseline_seed(prob);
        let seeds = structured_seeds(prob, base, &settings)?;
        screened.extend(
            seeds
                .iter()
                .map(|s| (k, run(prob, s, &free, &screen)))
                .filter(|(_, a)| a.rss.is_finite()),
        );
    }
    screened.sort_by(|a, b| {
        a.1.rss
            .partial_cmp(&b.1.rss)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let (k, best) = screened
        .iter()
        .take(options.starts.max(1))
        .map(|(k, a)| {
            let mut q = [T::zero(); 9];
            q.copy_from_slice(&a.q);
            let mut refined = run(&probs[*k], &q, &free, &settings);
            refined.iterations += a.iterations;
            (*k, refined)
        })
        .filter(|(_, a)| a.rss.is_finite())
        .min_by(|a, b| {
            a.1.rss
                .partial_cmp(&b.1.rss)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .ok_or_else(|| FitError::DegenerateData("every start diverged".into()))?;
    finish(&probs[k], best)
}

/// Single-start fit from an explicit initial guess.
pub fn fit_model_from<T: Real>(
    spectrum: &ComplexSpectrum<T>,
    initial: &ModelParams<T>,
    options: &FitOptions<T>,
) -> Result<FitResult<T>, FitError> {
    check_input(spectrum)?;
    if !(initial.baseline.l_eff > T::zero()) {
        return Err(FitError::InvalidOptions("initial l_eff must be > 0".into()));
    }
    let polarity = if initial.kind == ModelKind::Ats && initial.first.amplitude < T::zero() {
        -T::one()
    } else {
        T::one()
    };
    let prob = Problem::new(
        spectrum,
        initial.kind,
        polarity,
        initial.baseline.l_eff,
        options.phase_weight,
    );
    let start = prob.to_internal(initial);
    let best = run(&prob, &start, &[true; 9], &settings_from(options));
    finish(&prob, best)
}
