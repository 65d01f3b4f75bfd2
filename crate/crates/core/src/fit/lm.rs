//! Bound-constrained Levenberg–Marquardt on a real residual vector.

use crate::linalg::{cholesky_in_place, cholesky_solve};
use crate::scalar::Real;

/// Residual vector and row-major Jacobian `∂r/∂p` (`n × m`).
pub struct Evaluation<T> {
    pub residuals: Vec<T>,
    pub jacobian: Vec<T>,
}

#[derive(Debug, Clone, Copy)]
pub struct LmSettings<T> {
    pub max_iterations: usize,
    /// Converged when an accepted step lowers the RSS by less than this
    /// fraction.
    pub rss_rel_tol: T,
    /// Converged when the scaled gradient `max_j |J_jᵀ r| / (‖J_j‖ ‖r‖)`
    /// falls below this value.
    pub gradient_tol: T,
    /// Converged when a step changes no free parameter by more than this
    /// fraction of `max(|p|, 1)`.
    pub step_tol: T,
}

impl<T: Real> Default for LmSettings<T> {
    fn default() -> Self {
        Self {
            max_iterations: 400,
            rss_rel_tol: T::lit(1e-10),
            gradient_tol: T::lit(1e-8),
            step_tol: T::lit(1e-14),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmOutcome<T> {
    pub params: Vec<T>,
    pub rss: T,
    pub iterations: usize,
    pub gradient_norm: T,
    pub converged: bool,
    /// `JᵀJ` over all parameters at the returned point (row-major `m × m`).
    pub jtj: Vec<T>,
}

fn rss<T: Real>(r: &[T]) -> T {
    r.iter().fold(T::zero(), |s, &v| s + v * v)
}

/// Minimises `Σ r²` over the parameters with `free[j] == true`, keeping each
/// parameter inside `[lower[j], upper[j]]` by projection after every step.
pub fn minimize<T: Real, F>(
    mut eval: F,
    start: &[T],
    free: &[bool],
    lower: &[T],
    upper: &[T],
    settings: &LmSettings<T>,
) -> LmOutcome<T>
where
    F: FnMut(&[T]) -> Evaluation<T>,
{
    let m = start.len();
    let project = |p: &mut [T]| {
        for j in 0..m {
            p[j] = p[j].max(lower[j]).min(upper[j]);
        }
    };
    let idx: Vec<usize> = (0..m).filter(|&j| free[j]).collect();
    let k = idx.len();

    let mut p = start.to_vec();
    project(&mut p);
    let mut cur = eval(&p);
    let n = cur.residuals.len();
    let mut cur_rss = rss(&cur.residuals);
    let mut lambda = T::lit(1e-3);
    let mut diag_scale = vec![T::zero(); k];
    let mut converged = false;
    let mut iterations = 0;
    let mut gnorm = T::infinity();

    let normal_eqs = |ev: &Evaluation<T>| {
        let mut a = vec![T::zero(); k * k];
        let mut g = vec![T::zero(); k];
        for row in 0..n {
            let jr = &ev.jacobian[row * m..(row + 1) * m];
            let r = ev.residuals[row];
            for (ai, &i) in idx.iter().enumerate() {
                let ji = jr[i];
                if ji == T::zero() {
                    continue;
                }
                g[ai] += ji * r;
                for (bi, &j) in idx.iter().enumerate().skip(ai) {
                    a[ai * k + bi] += ji * jr[j];
                }
            }
        }
        for ai in 0..k {
            for bi in 0..ai {
                a[ai * k + bi] = a[bi * k + ai];
            }
        }
        (a, g)
    };

    if k == 0 {
        return LmOutcome {
            jtj: full_jtj(&cur, n, m),
            params: p,
            rss: cur_rss,
            iterations: 0,
            gradient_norm: T::zero(),
            converged: true,
        };
    }

    let (mut a, mut g) = normal_eqs(&cur);
    'outer: while iterations < settings.max_iterations {
        iterations += 1;
        let rnorm = cur_rss.sqrt();
        gnorm = T::zero();
        for ai in 0..k {
            let col = a[ai * k + ai].sqrt();
            if col > T::zero() && rnorm > T::zero() {
                gnorm = gnorm.max(g[ai].abs() / (col * rnorm));
            }
            diag_scale[ai] = diag_scale[ai].max(a[ai * k + ai]);
        }
        if gnorm < settings.gradient_tol || cur_rss == T::zero() {
            converged = true;
            break;
        }
        loop {
            let mut lhs = a.clone();
            for ai in 0..k {
                let d = if diag_scale[ai] > T::zero() {
                    diag_scale[ai]
                } else {
                    T::one()
                };
                lhs[ai * k + ai] += lambda * d;
            }
            if !cholesky_in_place(&mut lhs, k) {
                lambda *= T::lit(10.0);
                if lambda > T::lit(1e30) {
                    converged = true;
                    break 'outer;
                }
                continue;
            }
            let neg_g: Vec<T> = g.iter().map(|&v| -v).collect();
            let delta = cholesky_solve(&lhs, k, &neg_g);
            let mut trial = p.clone();
            for (ai, &j) in idx.iter().enumerate() {
                trial[j] += delta[ai];
            }
            project(&mut trial);
            let small_step = idx
                .iter()
                .all(|&j| (trial[j] - p[j]).abs() <= settings.step_tol * p[j].abs().max(T::one()));
            let ev = eval(&trial);
            let trial_rss = rss(&ev.residuals);
            if trial_rss.is_finite() && trial_rss < cur_rss {
                let rel = (cur_rss - trial_rss) / cur_rss;
                p = trial;
                cur = ev;
                cur_rss = trial_rss;
                (a, g) = normal_eqs(&cur);
                lambda = (lambda / T::lit(3.0)).max(T::lit(1e-15));
                if rel < settings.rss_rel_tol || small_step {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            if small_step {
                // no representable improvement left
                converged = true;
                break 'outer;
            }
            lambda *= T::lit(4.0);
            if lambda > T::lit(1e30) {
                converged = true;
                break 'outer;
            }
        }
    }
    LmOutcome {
        jtj: full_jtj(&cur, n, m),
        params: p,
        rss: cur_rss,
        iterations,
        gradient_norm: gnorm,
        converged,
    }
}

fn full_jtj<T: Real>(ev: &Evaluation<T>, n: usize, m: usize) -> Vec<T> {
    let mut a = vec![T::zero(); m * m];
    for row in 0..n {
        let jr = &ev.jacobian[row * m..(row + 1) * m];
        for i in 0..m {
            if jr[i] == T::zero() {
                continue;
            }
            for j in i..m {
                a[i * m + j] += jr[i] * jr[j];
            }
        }
    }
    for i in 0..m {
        for j in 0..i {
            a[i * m + j] = a[j * m + i];
        }
    }
    a
}
