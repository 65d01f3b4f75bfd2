use std::path::Path;

use eit_core::fit::ModelKind;
use serde::{Deserialize, Serialize};

use super::fit::fit_kinds;
use super::{csv_bytes, Context};
use crate::error::WorkbenchError;
use crate::report::FileEcho;
use crate::spectrum_io::{read_spectrum, IngestOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationRow {
    pub control_rabi_hz: f64,
    pub file: String,
    pub sha256: Option<String>,
    /// `ok`, or the error that stopped this entry.
    pub status: String,
    pub weight_eit: Option<f64>,
    pub weight_ats: Option<f64>,
    pub rss_eit: Option<f64>,
    pub rss_ats: Option<f64>,
    pub converged_eit: Option<bool>,
    pub converged_ats: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminateResult {
    pub rows: Vec<DiscriminationRow>,
    pub table: String,
}

/// `(control_rabi_hz, file)` pairs; files are relative to the manifest.
pub fn read_manifest(path: &Path) -> Result<Vec<(f64, String)>, WorkbenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| WorkbenchError::io(path, e))?;
    let fmt = |row: Option<usize>, m: String| WorkbenchError::Format {
        path: path.to_path_buf(),
        row,
        message: m,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| fmt(Some(1), e.to_string()))?
        .clone();
    let col = |n: &str| {
        headers
            .iter()
            .position(|h| h == n)
            .ok_or_else(|| fmt(Some(1), format!("missing column `{n}`")))
    };
    let (c, f) = (col("control_rabi_hz")?, col("file")?);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| fmt(None, e.to_string()))?;
        let row = rec.position().map(|p| p.line() as usize);
        let control: f64 = rec
            .get(c)
            .and_then(|v| v.parse().ok())
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| fmt(row, "`control_rabi_hz` is not a finite number".into()))?;
        let file = rec
            .get(f)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| fmt(row, "empty `file`".into()))?;
        out.push((control, file.to_string()));
    }
    Ok(out)
}

fn discriminate_one(path: &Path, ctx: &Context) -> Result<DiscriminationRow, WorkbenchError> {
    let section = ctx.config.as_ref().map(|c| c.fit).unwrap_or_default();
    let spectrum = read_spectrum(
        path,
        IngestOptions {
            detrend: section.detrend,
        },
    )?;
    let (fits, aic) = fit_kinds(&spectrum, &[ModelKind::Eit, ModelKind::Ats], &section)?;
    let aic = aic.expect("two models");
    Ok(DiscriminationRow {
        control_rabi_hz: 0.0,
        file: String::new(),
        sha256: Some(FileEcho::of(path)?.sha256),
        status: "ok".into(),
        weight_eit: aic.weight_of(ModelKind::Eit),
        weight_ats: aic.weight_of(ModelKind::Ats),
        rss_eit: Some(fits[0].rss),
        rss_ats: Some(fits[1].rss),
        converged_eit: Some(fits[0].converged),
        converged_ats: Some(fits[1].converged),
    })
}

pub fn run(ctx: &Context) -> Result<Vec<String>, WorkbenchError> {
    let manifest = ctx.input()?;
    let entries = read_manifest(manifest)?;
    if entries.is_empty() {
        return Err(WorkbenchError::EmptyManifest(manifest.to_path_buf()));
    }
    let base = manifest.parent().unwrap_or(Path::new("."));
    let rows: Vec<DiscriminationRow> = entries
        .iter()
        .map(|(control, file)| {
            let row =
                discriminate_one(&base.join(file), ctx).unwrap_or_else(|e| DiscriminationRow {
                    control_rabi_hz: 0.0,
                    file: String::new(),
                    sha256: None,
                    status: e.to_string(),
                    weight_eit: None,
                    weight_ats: None,
                    rss_eit: None,
                    rss_ats: None,
                    converged_eit: None,
                    converged_ats: None,
                });
            DiscriminationRow {
                control_rabi_hz: *control,
                file: file.clone(),
                ..row
            }
        })
        .collect();
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let table = csv_bytes(
        &[
            "control_rabi_hz",
            "file",
            "status",
            "weight_eit",
            "weight_ats",
            "rss_eit",
            "rss_ats",
        ],
        rows.iter().map(|r| {
            vec![
                r.control_rabi_hz.to_string(),
                r.file.clone(),
                r.status.clone(),
                opt(r.weight_eit),
                opt(r.weight_ats),
                opt(r.rss_eit),
                opt(r.rss_ats),
            ]
        }),
    );
    let mut inputs = ctx.inputs.clone();
    inputs.input = Some(FileEcho::of(manifest)?);
    let mut lines: Vec<String> = rows
        .iter()
        .map(|r| match (r.weight_eit, r.weight_ats) {
            (Some(e), Some(a)) => {
                format!(
                    "Omega_c/2pi = {:.4} MHz {}: w_EIT = {e:.4}, w_ATS = {a:.4}",
                    r.control_rabi_hz / 1e6,
                    r.file
                )
            }
            _ => format!(
                "Omega_c/2pi = {:.4} MHz {}: {}",
                r.control_rabi_hz / 1e6,
                r.file,
                r.status
            ),
        })
        .collect();
    let result = DiscriminateResult {
        rows,
        table: "weights.csv".into(),
    };
    let path = ctx.finish(
        "discriminate",
        inputs,
        vec![("weights.csv".into(), table)],
        &result,
    )?;
    lines.push(format!("report: {}", path.display()));
    Ok(lines)
}
