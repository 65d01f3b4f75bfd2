use eit_core::lambda::{dark_state_fidelity, steady_state, DensityMatrix3, LambdaConfig};
use serde::{Deserialize, Serialize};

use eit_core::units::hz;

use super::{csv_bytes, to_hz, warning_lines, Context};
use crate::error::WorkbenchError;

/// Pure-dephasing rates (Hz, applied to levels 2 and 3 alike) of the
/// sensitivity table.
pub const DEPHASING_LADDER_HZ: [f64; 6] = [0.0, 1e3, 3e3, 1e4, 3e4, 1e5];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DephasingRow {
    pub gamma_phi_hz: f64,
    pub fidelity_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityResult {
    pub probe_rabi_hz: f64,
    pub control_rabi_hz: f64,
    /// Θ = atan2(Ωp, Ωc); zero when both drives are off.
    pub theta_rad: f64,
    pub fidelity: f64,
    pub fidelity_percent: f64,
    pub populations: [f64; 3],
    pub scan: Option<String>,
    /// Fidelity at the same drives with added pure dephasing.
    pub dephasing_sensitivity: Vec<DephasingRow>,
    pub warnings: Vec<String>,
}

/// Steady-state fidelity; with both drives off Θ = 0 and |D> = |1>.
pub fn fidelity_at(
    cfg: &LambdaConfig<f64>,
) -> Result<(f64, f64, DensityMatrix3<f64>), WorkbenchError> {
    let rho = steady_state(cfg)?;
    let (p, c) = if cfg.probe_rabi == 0.0 && cfg.control_rabi == 0.0 {
        (0.0, 1.0)
    } else {
        (cfg.probe_rabi, cfg.control_rabi)
    };
    Ok((p.atan2(c), dark_state_fidelity(&rho, p, c)?, rho))
}

pub fn run(ctx: &Context) -> Result<Vec<String>, WorkbenchError> {
    let cfg = ctx.config()?;
    let lc = cfg.lambda_config()?;
    let (theta, f, rho) = fidelity_at(&lc)?;
    let mut files = Vec::new();
    if let Some(scan) = cfg.fidelity_scan {
        let mut rows = Vec::new();
        for &c in &scan.control.values() {
            for &p in &scan.probe.values() {
                let (_, fid, _) = fidelity_at(&LambdaConfig {
                    probe_rabi: p,
                    control_rabi: c,
                    ..lc
                })?;
                rows.push(vec![
                    to_hz(p).to_string(),
                    to_hz(c).to_string(),
                    (100.0 * fid).to_string(),
                ]);
            }
        }
        files.push((
            "fidelity_scan.csv".to_string(),
            csv_bytes(
                &["probe_rabi_hz", "control_rabi_hz", "fidelity_percent"],
                rows,
            ),
        ));
    }
    let dephasing_sensitivity = DEPHASING_LADDER_HZ
        .iter()
        .map(|&g| {
            let cfg = LambdaConfig {
                gamma_phi2: hz(g),
                gamma_phi3: hz(g),
                ..lc
            };
            fidelity_at(&cfg).map(|(_, fid, _)| DephasingRow {
                gamma_phi_hz: g,
                fidelity_percent: 100.0 * fid,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let result = FidelityResult {
        probe_rabi_hz: to_hz(lc.probe_rabi),
        control_rabi_hz: to_hz(lc.control_rabi),
        theta_rad: theta,
        fidelity: f,
        fidelity_percent: 100.0 * f,
        populations: [rho.population(1), rho.population(2), rho.population(3)],
        scan: files.first().map(|(n, _)| n.clone()),
        dephasing_sensitivity,
        warnings: lc.validity_warnings(),
    };
    let path = ctx.finish("fidelity", ctx.inputs.clone(), files, &result)?;
    let mut lines = vec![format!(
        "Omega_p/2pi = {:.4} MHz, Omega_c/2pi = {:.4} MHz: F = {:.4} %",
        result.probe_rabi_hz / 1e6,
        result.control_rabi_hz / 1e6,
        result.fidelity_percent
    )];
    lines.extend(result.dephasing_sensitivity.iter().skip(1).map(|r| {
        format!(
            "  with gamma_phi/2pi = {:.0} kHz on levels 2, 3: F = {:.4} %",
            r.gamma_phi_hz / 1e3,
            r.fidelity_percent
        )
    }));
    lines.push(format!("report: {}", path.display()));
    lines.extend(warning_lines(&result.warnings));
    Ok(lines)
}
