use eit_core::fit::model::ln_s21_from_susceptibility;
use eit_core::lambda::{probe_sweep, LambdaConfig, TransmissionMapping};
use eit_core::spectrum::ComplexSpectrum;
use eit_core::synth::add_noise;
use eit_core::Cplx;
use serde::{Deserialize, Serialize};

use super::{csv_bytes, missing, to_hz, warning_lines, Context};
use crate::config::NoiseLevel;
use crate::error::WorkbenchError;
use crate::report::sha256_hex;
use crate::spectrum_io::spectrum_csv;

const DB_PER_NEPER: f64 = 20.0 / std::f64::consts::LN_10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatedFile {
    pub control_rabi_hz: f64,
    pub file: String,
    pub sha256: String,
    /// Noise-free `|S21|` at ω13 relative to the bare baseline, dB.
    pub relative_transmission_db: f64,
    pub noise_sigma: Option<f64>,
    pub noise_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateResult {
    pub probe_rabi_hz: f64,
    pub points: usize,
    pub manifest: String,
    pub files: Vec<SimulatedFile>,
    pub warnings: Vec<String>,
}

/// Largest `|ln S21 − ln S21_baseline|` over the spectrum.
fn feature_size(s: &ComplexSpectrum<f64>, mapping: &TransmissionMapping<f64>) -> f64 {
    s.points()
        .iter()
        .map(|p| {
            (p.ln_s21
                - ln_s21_from_susceptibility(&mapping.baseline, p.omega_p, Cplx::new(0.0, 0.0)))
            .norm()
        })
        .fold(0.0, f64::max)
}

fn relative_db(s: &ComplexSpectrum<f64>, mapping: &TransmissionMapping<f64>, omega_13: f64) -> f64 {
    let p = s
        .points()
        .iter()
        .min_by(|a, b| {
            (a.omega_p - omega_13)
                .abs()
                .total_cmp(&(b.omega_p - omega_13).abs())
        })
        .expect("non-empty spectrum");
    (p.ln_s21.re + mapping.baseline.alpha0) * DB_PER_NEPER
}

pub fn run(ctx: &Context) -> Result<Vec<String>, WorkbenchError> {
    let cfg = ctx.config()?;
    let template = cfg.lambda_config()?;
    let series = &cfg.require_lambda()?.control_series;
    let mapping = cfg.mapping.ok_or_else(|| missing("mapping"))?;
    let grid = cfg.probe_grid(template.omega_13)?;
    let seed = ctx.seed.or(cfg.noise.map(|n| n.seed));

    let mut files = Vec::new();
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for (i, &control) in series.iter().enumerate() {
        let lc = LambdaConfig {
            control_rabi: control,
            ..template
        };
        warnings.extend(lc.validity_warnings());
        let clean = probe_sweep(&lc, &grid, &mapping)?;
        let (spectrum, sigma, file_seed) = match cfg.noise {
            Some(n) => {
                let sigma = match n.level {
                    NoiseLevel::Sigma(s) => s,
                    NoiseLevel::SnrDb(db) => feature_size(&clean, &mapping) / 10f64.powf(db / 20.0),
                };
                let s = seed.unwrap_or(n.seed).wrapping_add(i as u64);
                (add_noise(&clean, sigma, s), Some(sigma), Some(s))
            }
            None => (clean.clone(), None, None),
        };
        let name = format!("spectrum_{i:02}.csv");
        let bytes = spectrum_csv(&spectrum);
        entries.push(SimulatedFile {
            control_rabi_hz: to_hz(control),
            file: name.clone(),
            sha256: sha256_hex(&bytes),
            relative_transmission_db: relative_db(&clean, &mapping, template.omega_13),
            noise_sigma: sigma,
            noise_seed: file_seed,
        });
        files.push((name, bytes));
    }
    let manifest = csv_bytes(
        &["control_rabi_hz", "file"],
        entries
            .iter()
            .map(|e| vec![e.control_rabi_hz.to_string(), e.file.clone()]),
    );
    files.push(("manifest.csv".into(), manifest));
    let result = SimulateResult {
        probe_rabi_hz: to_hz(template.probe_rabi),
        points: grid.len(),
        manifest: "manifest.csv".into(),
        files: entries,
        warnings,
    };
    let mut inputs = ctx.inputs.clone();
    inputs.seed = seed;
    let path = ctx.finish("simulate", inputs, files, &result)?;
    let mut lines: Vec<String> = result
        .files
        .iter()
        .map(|f| {
            format!(
                "Omega_c/2pi = {:.4} MHz -> {} (|S21| at f13 {:+.2} dB rel. baseline)",
                f.control_rabi_hz / 1e6,
                f.file,
                f.relative_transmission_db
            )
        })
        .collect();
    lines.push(format!("report: {}", path.display()));
    lines.extend(warning_lines(&result.warnings));
    Ok(lines)
}
