use eit_core::polariton::{build_polaritons, eit_condition, transition_curves, validity_warnings};
use serde::{Deserialize, Serialize};

use super::{csv_bytes, to_hz, warning_lines, Context};
use crate::error::WorkbenchError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolaritonResult {
    pub theta0_rad: f64,
    pub theta1_rad: f64,
    pub delta0_hz: f64,
    pub delta1_hz: f64,
    /// Rotating-frame energies of |1>..|4>, Hz.
    pub energies_hz: [f64; 4],
    pub gamma_31_hz: f64,
    pub gamma_32_hz: f64,
    pub gamma_21_hz: f64,
    pub f23_hz: f64,
    pub f13_hz: f64,
    pub f24_hz: f64,
    pub f14_hz: f64,
    pub in_nesting_regime: bool,
    /// ω23 < ω13 < ω24 < ω14.
    pub nested_order: bool,
    /// Whether `[lambda] control_rabi` is below γc; absent without `[lambda]`.
    pub control_below_gamma_c: Option<bool>,
    pub warnings: Vec<String>,
}

pub fn run(ctx: &Context) -> Result<Vec<String>, WorkbenchError> {
    let cfg = ctx.config()?;
    let (device, drive) = cfg.require_device()?;
    let sys = build_polaritons(&device, &drive);
    let t = sys.transitions;
    let g = sys.decay_rates;
    let result = PolaritonResult {
        theta0_rad: sys.angles.theta0,
        theta1_rad: sys.angles.theta1,
        delta0_hz: to_hz(sys.angles.delta0),
        delta1_hz: to_hz(sys.angles.delta1),
        energies_hz: sys.energies.map(to_hz),
        gamma_31_hz: to_hz(g.gamma_31),
        gamma_32_hz: to_hz(g.gamma_32),
        gamma_21_hz: to_hz(g.gamma_21),
        f23_hz: to_hz(t.omega_23),
        f13_hz: to_hz(t.omega_13),
        f24_hz: to_hz(t.omega_24),
        f14_hz: to_hz(t.omega_14),
        in_nesting_regime: sys.in_nesting_regime,
        nested_order: t.is_nested_order(),
        control_below_gamma_c: cfg
            .lambda
            .as_ref()
            .map(|l| eit_condition(l.control_rabi, &device)),
        warnings: validity_warnings(&device, &drive),
    };
    let mut files = Vec::new();
    if let Some(axis) = cfg.drive_sweep {
        let rows = transition_curves(&device, drive.omega_d, &axis.values())?;
        let csv = csv_bytes(
            &[
                "rabi_hz",
                "f23_hz",
                "f13_hz",
                "f24_hz",
                "f14_hz",
                "splitting_13_23_hz",
            ],
            rows.iter().map(|r| {
                [
                    r.rabi,
                    r.omega_23,
                    r.omega_13,
                    r.omega_24,
                    r.omega_14,
                    r.omega_13 - r.omega_23,
                ]
                .iter()
                .map(|&v| to_hz(v).to_string())
                .collect()
            }),
        );
        files.push(("transitions.csv".to_string(), csv));
    }
    let path = ctx.finish("polariton", ctx.inputs.clone(), files, &result)?;
    let mut lines = vec![
        format!(
            "theta0 = {:.4} rad, theta1 = {:.4} rad",
            result.theta0_rad, result.theta1_rad
        ),
        format!(
            "gamma31/2pi = {:.4} MHz, gamma32/2pi = {:.4} MHz, gamma21/2pi = {:.3} kHz",
            result.gamma_31_hz / 1e6,
            result.gamma_32_hz / 1e6,
            result.gamma_21_hz / 1e3
        ),
        format!(
            "f23 = {:.6} GHz, f13 = {:.6} GHz, f24 = {:.6} GHz, f14 = {:.6} GHz",
            result.f23_hz / 1e9,
            result.f13_hz / 1e9,
            result.f24_hz / 1e9,
            result.f14_hz / 1e9
        ),
        format!(
            "nesting regime: {}, nested order: {}",
            result.in_nesting_regime, result.nested_order
        ),
        format!("report: {}", path.display()),
    ];
    lines.extend(warning_lines(&result.warnings));
    Ok(lines)
}
