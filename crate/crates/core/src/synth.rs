//! Synthetic spectra with reproducible Gaussian noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::fit::model::{eval_ln_s21, ln_s21_from_susceptibility, ModelParams};
use crate::scalar::{Cplx, Real};
use crate::spectrum::{ComplexSpectrum, SpectrumPoint};

/// `n` evenly spaced frequencies from `start` to `stop` inclusive.
pub fn linspace<T: Real>(start: T, stop: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / T::from_usize_lossy(n - 1);
            (0..n)
                .map(|i| start + step * T::from_usize_lossy(i))
                .collect()
        }
    }
}

/// Noise-free model spectrum on `grid`.
pub fn model_spectrum<T: Real>(params: &ModelParams<T>, grid: &[T]) -> ComplexSpectrum<T> {
    let pts = grid
        .iter()
        .map(|&w| SpectrumPoint {
            omega_p: w,
            ln_s21: eval_ln_s21(params, w),
            rho31: None,
        })
        .collect();
    ComplexSpectrum::new(pts).expect("grid must be strictly increasing and finite")
}

/// Largest `|ln S21 − ln S21_baseline|` over the grid: the feature size used
/// to express signal-to-noise ratios.
pub fn feature_amplitude<T: Real>(params: &ModelParams<T>, grid: &[T]) -> T {
    grid.iter()
        .map(|&w| {
            let full = eval_ln_s21(params, w);
            let bare = ln_s21_from_susceptibility(&params.baseline, w, Cplx::from(T::zero()));
            (full - bare).norm()
        })
        .fold(T::zero(), T::max)
}

/// Noise standard deviation giving `snr_db` (amplitude ratio, 20·log10)
/// relative to the model's feature amplitude.
pub fn sigma_for_snr<T: Real>(params: &ModelParams<T>, grid: &[T], snr_db: T) -> T {
    feature_amplitude(params, grid) / T::lit(10.0).powf(snr_db / T::lit(20.0))
}

/// Adds independent N(0, σ²) noise to `ln|S21|` and to the phase of every
/// point. The stream is ChaCha8 seeded with `seed`, so output is identical
/// across runs and platforms.
pub fn add_noise<T: Real>(
    spectrum: &ComplexSpectrum<T>,
    sigma: T,
    seed: u64,
) -> ComplexSpectrum<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma64 = sigma.to_f64().unwrap_or(0.0);
    let normal = Normal::new(0.0, sigma64.max(0.0)).expect("finite sigma");
    let pts = spectrum
        .points()
        .iter()
        .map(|p| {
            let dm = T::lit(normal.sample(&mut rng));
            let dp = T::lit(normal.sample(&mut rng));
            SpectrumPoint {
                ln_s21: p.ln_s21 + Cplx::new(dm, dp),
                ..*p
            }
        })
        .collect();
    ComplexSpectrum::new(pts).expect("noise keeps values finite")
}
