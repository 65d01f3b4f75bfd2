use eit_core::fit::{
    accept_best_effort, aic_weights, eval_ln_s21, fit_model, AicReport, FitResult, ModelKind,
};
use eit_core::spectrum::ComplexSpectrum;
use serde::{Deserialize, Serialize};

use super::{csv_bytes, to_hz, Context};
use crate::config::FitSection;
use crate::error::WorkbenchError;
use crate::report::FileEcho;
use crate::spectrum_io::{read_spectrum, IngestOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridEcho {
    pub start_hz: f64,
    pub stop_hz: f64,
    pub points: usize,
}

impl GridEcho {
    pub fn of(s: &ComplexSpectrum<f64>) -> Self {
        let w = s.omegas();
        Self {
            start_hz: to_hz(w[0]),
            stop_hz: to_hz(w[w.len() - 1]),
            points: w.len(),
        }
    }
}

/// Fits in rad/s; `l_eff` in metres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub grid: GridEcho,
    pub fits: Vec<FitResult<f64>>,
    pub aic: Option<AicReport<f64>>,
    pub residuals: String,
}

/// Fitted models with their Akaike weights when more than one was fitted.
pub type Fitted = (Vec<FitResult<f64>>, Option<AicReport<f64>>);

/// Fits each requested model; a model that fails to converge still reports
/// its best residual, flagged `converged = false`.
pub fn fit_kinds(
    spectrum: &ComplexSpectrum<f64>,
    kinds: &[ModelKind],
    section: &FitSection,
) -> Result<Fitted, WorkbenchError> {
    let fits = kinds
        .iter()
        .map(|&k| accept_best_effort(fit_model(spectrum, k, &section.options)))
        .collect::<Result<Vec<_>, _>>()?;
    let aic = if fits.len() > 1 {
        Some(aic_weights(&fits, section.correction)?)
    } else {
        None
    };
    Ok((fits, aic))
}

fn residual_csv(spectrum: &ComplexSpectrum<f64>, fits: &[FitResult<f64>]) -> Vec<u8> {
    let mut header = vec![
        "frequency_hz".to_string(),
        "ln_mag".into(),
        "phase_rad".into(),
    ];
    for f in fits {
        let m = f.kind.name().to_lowercase();
        header.extend([
            format!("{m}_ln_mag"),
            format!("{m}_phase_rad"),
            format!("{m}_resid_ln_mag"),
            format!("{m}_resid_phase"),
        ]);
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_bytes(
        &header,
        spectrum.points().iter().map(|p| {
            let mut row = vec![
                to_hz(p.omega_p).to_string(),
                p.ln_s21.re.to_string(),
                p.ln_s21.im.to_string(),
            ];
            for f in fits {
                let m = eval_ln_s21(&f.params, p.omega_p);
                row.extend(
                    [m.re, m.im, p.ln_s21.re - m.re, p.ln_s21.im - m.im]
                        .iter()
                        .map(f64::to_string),
                );
            }
            row
        }),
    )
}

pub fn run(ctx: &Context) -> Result<Vec<String>, WorkbenchError> {
    let input = ctx.input()?;
    let section = ctx.config.as_ref().map(|c| c.fit).unwrap_or_default();
    let spectrum = read_spectrum(
        input,
        IngestOptions {
            detrend: section.detrend,
        },
    )?;
    let (fits, aic) = fit_kinds(&spectrum, &ctx.model.kinds(), &section)?;
    let mut inputs = ctx.inputs.clone();
    inputs.input = Some(FileEcho::of(input)?);
    let files = vec![("residuals.csv".to_string(), residual_csv(&spectrum, &fits))];
    let mut lines: Vec<String> = fits
        .iter()
        .map(|f| {
            format!(
                "{}: RSS = {:.6e} (n = {}, k = {}, {} iterations{})",
                f.kind,
                f.rss,
                f.n,
                f.k,
                f.iterations,
                if f.converged { "" } else { ", NOT converged" }
            )
        })
        .collect();
    if let Some(a) = &aic {
        for e in &a.entries {
            lines.push(format!("AIC weight {}: {:.6}", e.kind, e.weight));
        }
    }
    let report = FitReport {
        grid: GridEcho::of(&spectrum),
        fits,
        aic,
        residuals: "residuals.csv".into(),
    };
    let path = ctx.finish("fit", inputs, files, &report)?;
    lines.push(format!("report: {}", path.display()));
    Ok(lines)
}
