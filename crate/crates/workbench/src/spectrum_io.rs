//! Spectrum CSV files.
//!
//! Columns are selected by header name. Two layouts are accepted:
//! `frequency_hz, s21_real, s21_imag` and
//! `frequency_hz, s21_mag_db, s21_phase_rad`; other columns are ignored.
//! Row numbers in diagnostics are file line numbers (the header is line 1).

use std::path::Path;

use eit_core::spectrum::{unwrap_phase, ComplexSpectrum, SpectrumPoint};
use eit_core::units::{from_rads, hz, FreqUnit};
use eit_core::Cplx;

use crate::error::WorkbenchError;

pub const MIN_ROWS: usize = 16;

const DB_PER_NEPER: f64 = 20.0 / std::f64::consts::LN_10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Cartesian,
    Polar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IngestOptions {
    /// Remove a linear phase (electric delay) through the mean phase of the
    /// first and last 10 % of the trace.
    pub detrend: bool,
}

fn format_err(path: &Path, row: Option<usize>, message: impl Into<String>) -> WorkbenchError {
    WorkbenchError::Format {
        path: path.to_path_buf(),
        row,
        message: message.into(),
    }
}

pub fn read_spectrum(
    path: &Path,
    opts: IngestOptions,
) -> Result<ComplexSpectrum<f64>, WorkbenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| WorkbenchError::io(path, e))?;
    parse_spectrum(&text, path, opts)
}

pub fn parse_spectrum(
    text: &str,
    path: &Path,
    opts: IngestOptions,
) -> Result<ComplexSpectrum<f64>, WorkbenchError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| format_err(path, Some(1), e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let freq = col("frequency_hz")
        .ok_or_else(|| format_err(path, Some(1), "missing column `frequency_hz`"))?;
    let (layout, a, b) = match (col("s21_real"), col("s21_imag"), col("s21_mag_db"), col("s21_phase_rad")) {
        (Some(re), Some(im), None, None) => (Layout::Cartesian, re, im),
        (None, None, Some(m), Some(p)) => (Layout::Polar, m, p),
        _ => {
            return Err(format_err(
                path,
                Some(1),
                "columns must be (frequency_hz, s21_real, s21_imag) or (frequency_hz, s21_mag_db, s21_phase_rad)",
            ))
        }
    };

    let mut omega = Vec::new();
    let mut ln_mag = Vec::new();
    let mut phase = Vec::new();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            format_err(path, e.position().map(|p| p.line() as usize), e.to_string())
        })?;
        let row = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let num = |i: usize, name: &str| -> Result<f64, WorkbenchError> {
            let field = rec
                .get(i)
                .ok_or_else(|| format_err(path, Some(row), format!("missing `{name}`")))?;
            let v: f64 = field.parse().map_err(|_| {
                format_err(
                    path,
                    Some(row),
                    format!("`{name}` is not a number: {field:?}"),
                )
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format_err(
                    path,
                    Some(row),
                    format!("`{name}` is not finite"),
                ))
            }
        };
        let f = num(freq, "frequency_hz")?;
        if let Some(&prev) = omega.last() {
            let w = hz(f);
            if w == prev {
                return Err(format_err(
                    path,
                    Some(row),
                    format!("duplicate frequency {f} Hz"),
                ));
            }
            if w < prev {
                return Err(format_err(
                    path,
                    Some(row),
                    format!("frequency {f} Hz is below the previous row"),
                ));
            }
        }
        let (m, p) = match layout {
            Layout::Cartesian => {
                let s = Cplx::new(num(a, "s21_real")?, num(b, "s21_imag")?);
                if s.norm() == 0.0 {
                    return Err(format_err(
                        path,
                        Some(row),
                        "zero transmission has no logarithm",
                    ));
                }
                (s.norm().ln(), s.arg())
            }
            Layout::Polar => (
                num(a, "s21_mag_db")? / DB_PER_NEPER,
                num(b, "s21_phase_rad")?,
            ),
        };
        omega.push(hz(f));
        ln_mag.push(m);
        phase.push(p);
        rows.push(row);
    }
    if omega.len() < MIN_ROWS {
        return Err(format_err(
            path,
            None,
            format!(
                "{} data rows; at least {MIN_ROWS} are required",
                omega.len()
            ),
        ));
    }
    unwrap_phase(&mut phase);
    if opts.detrend {
        detrend_phase(&omega, &mut phase);
    }
    let points = omega
        .iter()
        .zip(&ln_mag)
        .zip(&phase)
        .map(|((&w, &m), &p)| SpectrumPoint {
            omega_p: w,
            ln_s21: Cplx::new(m, p),
            rho31: None,
        })
        .collect();
    ComplexSpectrum::new(points).map_err(|e| format_err(path, None, e.to_string()))
}

/// Subtracts the line through the mean (ω, φ) of each 10 % edge.
pub fn detrend_phase(omega: &[f64], phase: &mut [f64]) {
    let n = omega.len();
    let m = (n / 10).max(1);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (w0, p0) = (mean(&omega[..m]), mean(&phase[..m]));
    let (w1, p1) = (mean(&omega[n - m..]), mean(&phase[n - m..]));
    let slope = (p1 - p0) / (w1 - w0);
    let mid = (w0 + w1) / 2.0;
    for (p, &w) in phase.iter_mut().zip(omega) {
        *p -= slope * (w - mid);
    }
}

/// CSV text in the polar layout; phase is written unwrapped. Simulated
/// spectra also carry the probe coherence.
pub fn spectrum_csv(spectrum: &ComplexSpectrum<f64>) -> Vec<u8> {
    let with_rho = spectrum.points().iter().all(|p| p.rho31.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["frequency_hz", "s21_mag_db", "s21_phase_rad"];
    if with_rho {
        header.extend(["rho31_real", "rho31_imag"]);
    }
    w.write_record(&header).expect("in-memory write");
    for p in spectrum.points() {
        let mut rec = vec![
            from_rads(p.omega_p, FreqUnit::Hz).to_string(),
            (p.ln_s21.re * DB_PER_NEPER).to_string(),
            p.ln_s21.im.to_string(),
        ];
        if let (true, Some(r)) = (with_rho, p.rho31) {
            rec.push(r.re.to_string());
            rec.push(r.im.to_string());
        }
        w.write_record(&rec).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}
