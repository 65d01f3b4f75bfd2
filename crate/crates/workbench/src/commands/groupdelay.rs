use eit_core::fit::{group_delay, group_velocity, FitResult, ModelKind};
use eit_core::synth::linspace;
use eit_core::units::hz;
use serde::{Deserialize, Serialize};

use super::fit::FitReport;
use super::{csv_bytes, to_hz, Context};
use crate::error::WorkbenchError;
use crate::report::{FileEcho, RunReport};

/// Points of the τg table over the fitted window.
pub const TABLE_POINTS: usize = 1001;
/// Points of the window-centre search over ±Γ of the suppression line.
pub const SEARCH_POINTS: usize = 2001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDelayResult {
    pub length_m: f64,
    pub window_center_hz: f64,
    pub tau_g_s: f64,
    pub v_g_m_per_s: f64,
    /// Sign changes of τg along the table.
    pub tau_sign_changes: usize,
    pub table: String,
}

/// Frequency of largest |τg| within ±Γ of the suppression line (the
/// added, dip-shaped EIT term).
pub fn window_center(fit: &FitResult<f64>) -> (f64, f64) {
    let line = fit.params.first;
    linspace(
        line.center - line.width,
        line.center + line.width,
        SEARCH_POINTS,
    )
    .into_iter()
    .map(|w| (w, group_delay(fit, w)))
    .fold((line.center, group_delay(fit, line.center)), |best, cur| {
        if cur.1.abs() > best.1.abs() {
            cur
        } else {
            best
        }
    })
}

pub fn sign_changes(values: &[f64]) -> usize {
    values
        .windows(2)
        .filter(|w| (w[0] < 0.0) != (w[1] < 0.0))
        .count()
}

pub fn run(ctx: &Context) -> Result<Vec<String>, WorkbenchError> {
    let input = ctx.input()?;
    let text = std::fs::read_to_string(input).map_err(|e| WorkbenchError::io(input, e))?;
    let report: RunReport<FitReport> =
        serde_json::from_str(&text).map_err(|e| WorkbenchError::Format {
            path: input.to_path_buf(),
            row: Some(e.line()),
            message: format!("not a fit report: {e}"),
        })?;
    let fit = report
        .result
        .fits
        .iter()
        .find(|f| f.kind == ModelKind::Eit && f.converged)
        .ok_or_else(|| WorkbenchError::MissingFit(input.to_path_buf()))?;
    let length = ctx
        .length
        .or_else(|| {
            ctx.config
                .as_ref()
                .and_then(|c| c.device.map(|d| d.line_length_l))
        })
        .ok_or_else(|| {
            WorkbenchError::Usage("group velocity needs --length or [device] length_m".into())
        })?;
    if !(length > 0.0) {
        return Err(WorkbenchError::Usage("--length must be > 0".into()));
    }
    let g = report.result.grid;
    let grid = linspace(hz(g.start_hz), hz(g.stop_hz), TABLE_POINTS);
    let taus: Vec<f64> = grid.iter().map(|&w| group_delay(fit, w)).collect();
    let (center, tau) = window_center(fit);
    let v_g = group_velocity(tau, length)?;
    let table = csv_bytes(
        &["frequency_hz", "tau_g_s"],
        grid.iter()
            .zip(&taus)
            .map(|(&w, t)| vec![to_hz(w).to_string(), t.to_string()]),
    );
    let result = GroupDelayResult {
        length_m: length,
        window_center_hz: to_hz(center),
        tau_g_s: tau,
        v_g_m_per_s: v_g,
        tau_sign_changes: sign_changes(&taus),
        table: "group_delay.csv".into(),
    };
    let mut inputs = ctx.inputs.clone();
    inputs.input = Some(FileEcho::of(input)?);
    inputs.length_m = Some(length);
    let path = ctx.finish(
        "groupdelay",
        inputs,
        vec![("group_delay.csv".into(), table)],
        &result,
    )?;
    Ok(vec![
        format!(
            "window centre {:.6} GHz: tau_g = {:.4e} s",
            result.window_center_hz / 1e9,
            tau
        ),
        format!("v_g = {:.4e} m/s over l = {length} m", v_g),
        format!("report: {}", path.display()),
    ])
}
