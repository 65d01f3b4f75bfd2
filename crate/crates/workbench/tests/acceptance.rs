//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are pinned below.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use eit_core::fit::model::phase_derivative;
use eit_core::fit::{
    accept_best_effort, aic_weights, eval_susceptibility, fit_model, group_delay, group_velocity,
    AicCorrection, BaselineParams, FitOptions, FitResult, Lorentzian, ModelKind, ModelParams,
    SPEED_OF_LIGHT,
};
use eit_core::lambda::{
    fidelity_scan, probe_sweep, steady_state, LambdaConfig, TransmissionMapping,
};
use eit_core::polariton::{build_polaritons, DeviceParams, PolaritonDrive};
use eit_core::synth::{add_noise, linspace, model_spectrum, sigma_for_snr};
use eit_core::units::{mhz_2pi, rate_from_lifetime, to_hz};
use eit_core::Cplx;
use eit_workbench::commands::groupdelay::window_center;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IDENTITY_REL: f64 = 1e-12;
const RATE_REL: f64 = 0.25;
const CONTROL_MHZ_TOL: f64 = 0.3;
const FIDELITY_PT_TOL: f64 = 0.3;
const ORACLE_REL: f64 = 1e-8;
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const EIGEN_FLOOR: f64 = -1e-9;
const SUPPRESSION_MIN: f64 = 100.0;
const RECOVERY_REL: f64 = 1e-6;
const SE_MULTIPLE: f64 = 3.0;
const SEED_FRACTION: f64 = 0.95;
const WEIGHT_MIN: f64 = 0.99;
const NOISE_WEIGHT_BAND: f64 = 0.15;
const FD_REL: f64 = 1e-6;
const VG_REL: f64 = 0.01;
const SEEDS: u64 = 200;
const SNR_DB: f64 = 30.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn mhz(omega: f64) -> f64 {
    to_hz(omega) / 1e6
}

fn reference_device() -> DeviceParams<f64> {
    DeviceParams::from_n0_transition(
        mhz_2pi(5648.0),
        mhz_2pi(6485.0),
        mhz_2pi(1.54),
        rate_from_lifetime(35e-6),
        mhz_2pi(0.82),
        10.3e-3,
    )
}

fn reference_drive(rabi_mhz: f64) -> PolaritonDrive<f64> {
    PolaritonDrive {
        omega_d: mhz_2pi(5646.6),
        rabi: mhz_2pi(rabi_mhz),
    }
}

fn reference_lambda(probe_mhz: f64, control_mhz: f64) -> LambdaConfig<f64> {
    LambdaConfig {
        omega_13: mhz_2pi(6484.8),
        omega_23: mhz_2pi(6482.8),
        gamma_31: mhz_2pi(0.35),
        gamma_32: mhz_2pi(0.47),
        gamma_21: mhz_2pi(2.74e-3),
        gamma_phi2: 0.0,
        gamma_phi3: 0.0,
        probe_rabi: mhz_2pi(probe_mhz),
        probe_omega: mhz_2pi(6484.8),
        control_rabi: mhz_2pi(control_mhz),
        control_omega: mhz_2pi(6482.8),
    }
}

fn decay_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let chi = mhz_2pi(rng.random_range(0.2..5.0));
        let dev: DeviceParams<f64> = DeviceParams::from_n0_transition(
            mhz_2pi(rng.random_range(4000.0..7000.0)),
            mhz_2pi(rng.random_range(6000.0..8000.0)),
            chi,
            mhz_2pi(rng.random_range(1e-3..0.1)),
            mhz_2pi(rng.random_range(0.05..5.0)),
            1e-2,
        );
        let omega_d = dev.n0_transition() - rng.random_range(0.0..2.0 * chi);
        let drive = PolaritonDrive {
            omega_d,
            rabi: mhz_2pi(rng.random_range(0.0..5.0)),
        };
        let g = build_polaritons(&dev, &drive).decay_rates;
        worst = worst.max(((g.gamma_31 + g.gamma_32) / dev.gamma_c - 1.0).abs());
    }
    outcome(
        worst <= IDENTITY_REL,
        format!("max |(γ31+γ32)/γc - 1| = {worst:.2e} over 1000 sets"),
    )
}

fn reference_rates() -> Outcome {
    let sys = build_polaritons(&reference_device(), &reference_drive(1.46));
    let (g31, g32) = (mhz(sys.decay_rates.gamma_31), mhz(sys.decay_rates.gamma_32));
    let (e31, e32) = (g31 / 0.35 - 1.0, g32 / 0.47 - 1.0);
    println!(
        "    interpretation: ω_q-χ = 2π·5648 MHz, χ = 2π·1.54 MHz, ω_d = 2π·5646.6 MHz, Ω_d = 2π·1.46 MHz, γ_c = 2π·0.82 MHz"
    );
    println!(
        "    θ0 = {:.4}, θ1 = {:.4}; γ31/2π = {g31:.4} MHz ({:+.1} % vs 0.35), γ32/2π = {g32:.4} MHz ({:+.1} % vs 0.47)",
        sys.angles.theta0,
        sys.angles.theta1,
        100.0 * e31,
        100.0 * e32
    );
    println!("    the formula splits γ_c by the mean mixing angle; the reported pair sums to the same 0.82 MHz");
    outcome(
        e31.abs() <= RATE_REL && e32.abs() <= RATE_REL,
        format!("γ31 {g31:.4} MHz, γ32 {g32:.4} MHz"),
    )
}

fn control_frequency() -> Outcome {
    let sys = build_polaritons(&reference_device(), &reference_drive(1.46));
    let f = mhz(sys.transitions.omega_23);
    outcome(
        (f - 6482.8).abs() <= CONTROL_MHZ_TOL,
        format!("ω23/2π = {f:.4} MHz (target 6482.8 ± {CONTROL_MHZ_TOL})"),
    )
}

fn peak_ordering() -> Outcome {
    let dev = reference_device();
    let mut bad = Vec::new();
    for rabi in linspace(0.03, 3.0, 50) {
        let sys = build_polaritons(&dev, &reference_drive(rabi));
        if !(sys.in_nesting_regime && sys.transitions.is_nested_order()) {
            bad.push(rabi);
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} of 50 drive strengths (0.03-3 MHz) violate ω23<ω13<ω24<ω14 {bad:?}",
            bad.len()
        ),
    )
}

fn boundary_fidelity() -> Outcome {
    let cfg = reference_lambda(0.0, 0.82).role_swapped();
    let rows = fidelity_scan(&cfg, &[(cfg.probe_rabi, cfg.control_rabi)]).unwrap();
    let f = 100.0 * rows[0].fidelity;
    outcome(
        (f - 99.39).abs() <= FIDELITY_PT_TOL,
        format!("F = {f:.3} % (target 99.39 ± {FIDELITY_PT_TOL})"),
    )
}

/// Probe coherence of the control-free system: a driven two-level transition
/// whose excited state also feeds the metastable level.
fn two_level_rho31(cfg: &LambdaConfig<f64>) -> Cplx<f64> {
    let delta = cfg.probe_omega - cfg.omega_13;
    let g3 = cfg.gamma_31 + cfg.gamma_32;
    let om = cfg.probe_rabi;
    let sat = om * om / (4.0 * delta * delta + g3 * g3);
    let shelving = 2.0 + cfg.gamma_32 / cfg.gamma_21;
    Cplx::new(om / 2.0, 0.0) / Cplx::new(delta, g3 / 2.0) / (1.0 + shelving * sat)
}

fn two_level_oracle() -> Outcome {
    let base = reference_lambda(0.062, 0.0);
    let mut worst: f64 = 0.0;
    for w in linspace(
        base.omega_13 - mhz_2pi(3.0),
        base.omega_13 + mhz_2pi(3.0),
        201,
    ) {
        let cfg = LambdaConfig {
            probe_omega: w,
            ..base
        };
        let got = steady_state(&cfg).unwrap().rho31();
        let want = two_level_rho31(&cfg);
        worst = worst.max((got - want).norm() / want.norm());
    }
    outcome(
        worst <= ORACLE_REL,
        format!("max relative deviation {worst:.2e} over 201 points"),
    )
}

fn density_invariants() -> Outcome {
    let base = reference_lambda(0.062, 0.0);
    let (mut herm, mut trace, mut eig): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for wc in linspace(0.0, mhz_2pi(2.0), 21) {
        for wp in linspace(
            base.omega_13 - mhz_2pi(3.0),
            base.omega_13 + mhz_2pi(3.0),
            101,
        ) {
            let rho = steady_state(&LambdaConfig {
                probe_omega: wp,
                control_rabi: wc,
                ..base
            })
            .unwrap();
            herm = herm.max(rho.hermiticity_error());
            trace = trace.max((rho.trace() - Cplx::new(1.0, 0.0)).norm());
            eig = eig.min(
                rho.eigenvalues()
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::min),
            );
        }
    }
    outcome(
        herm <= HERMITIAN_TOL && trace <= TRACE_TOL && eig >= EIGEN_FLOOR,
        format!(
            "101x21 grid: hermiticity {herm:.1e}, |tr-1| {trace:.1e}, min eigenvalue {eig:.1e}"
        ),
    )
}

fn suppression() -> Outcome {
    let off = steady_state(&reference_lambda(0.062, 0.0))
        .unwrap()
        .rho31()
        .norm();
    let on = steady_state(&reference_lambda(0.062, 0.82))
        .unwrap()
        .rho31()
        .norm();
    let cfg = reference_lambda(0.062, 0.82);
    let g3 = cfg.gamma_31 + cfg.gamma_32;
    // weak-probe estimate at two-photon resonance against the unsaturated line
    let estimate = g3 * cfg.gamma_21 / (cfg.control_rabi * cfg.control_rabi);
    // the control-free line is depleted by shelving into level 2
    let shelving = 1.0 + (2.0 + cfg.gamma_32 / cfg.gamma_21) * (cfg.probe_rabi / g3).powi(2);
    let ratio = off / on;
    outcome(
        ratio >= SUPPRESSION_MIN,
        format!(
            "|ρ31| ratio {ratio:.1}; on/off {:.2e}, perturbative {estimate:.2e} x shelving {shelving:.3} = {:.2e}",
            1.0 / ratio,
            estimate * shelving
        ),
    )
}

struct Synthetic {
    grid: Vec<f64>,
    eit: ModelParams<f64>,
    ats: ModelParams<f64>,
    options: FitOptions<f64>,
}

fn synthetic() -> Synthetic {
    let w0 = mhz_2pi(6484.8);
    let l = 2.0;
    let line = |h: f64, g_mhz: f64, c: f64| {
        let width = mhz_2pi(g_mhz);
        Lorentzian {
            amplitude: h * width * SPEED_OF_LIGHT / (w0 * l),
            center: c,
            width,
        }
    };
    let baseline = BaselineParams {
        l_eff: l,
        alpha0: 0.3,
        phi0: 0.7,
    };
    Synthetic {
        grid: linspace(w0 - mhz_2pi(5.0 * 0.82), w0 + mhz_2pi(5.0 * 0.82), 201),
        eit: ModelParams {
            kind: ModelKind::Eit,
            first: line(0.5, 0.15, w0),
            second: line(2.0, 0.82, w0 + mhz_2pi(0.02)),
            baseline,
        },
        ats: ModelParams {
            kind: ModelKind::Ats,
            first: line(1.5, 0.82, w0 - mhz_2pi(0.6)),
            second: line(1.0, 0.7, w0 + mhz_2pi(0.6)),
            baseline,
        },
        options: FitOptions {
            l_eff_guess: Some(1.15 * l),
            ..FitOptions::default()
        },
    }
}

fn max_rel(fit: &ModelParams<f64>, truth: &ModelParams<f64>) -> f64 {
    let (a, b) = (fit.canonical().to_vec(), truth.canonical().to_vec());
    a.iter()
        .zip(&b)
        .map(|(x, y)| ((x - y) / y).abs())
        .fold(0.0, f64::max)
}

fn within_se(fit: &FitResult<f64>, truth: &ModelParams<f64>) -> bool {
    let Some(mut se) = fit.std_errors() else {
        return false;
    };
    let canonical = fit.params.canonical();
    if canonical != fit.params {
        se[..6].rotate_left(3);
    }
    let (a, b) = (canonical.to_vec(), truth.canonical().to_vec());
    (0..9).all(|i| (a[i] - b[i]).abs() <= SE_MULTIPLE * se[i])
}

fn fit_recovery() -> Outcome {
    let s = synthetic();
    let mut detail = Vec::new();
    let mut pass = true;
    for truth in [s.eit, s.ats] {
        let clean = model_spectrum(&truth, &s.grid);
        let rel = match fit_model(&clean, truth.kind, &s.options) {
            Ok(f) => max_rel(&f.params, &truth),
            Err(e) => {
                detail.push(format!("{} noise-free: {e}", truth.kind));
                f64::INFINITY
            }
        };
        pass &= rel <= RECOVERY_REL;
        let sigma = sigma_for_snr(&truth, &s.grid, SNR_DB);
        let hits = (0..SEEDS)
            .filter(|&seed| {
                let noisy = add_noise(&clean, sigma, seed);
                accept_best_effort(fit_model(&noisy, truth.kind, &s.options))
                    .map(|f| within_se(&f, &truth))
                    .unwrap_or(false)
            })
            .count();
        let frac = hits as f64 / SEEDS as f64;
        pass &= frac >= SEED_FRACTION;
        detail.push(format!(
            "{}: noise-free max rel {rel:.1e}, {hits}/{SEEDS} seeds within {SE_MULTIPLE} SE",
            truth.kind
        ));
    }
    outcome(pass, detail.join("; "))
}

fn weights(spectrum: &eit_core::ComplexSpectrum, opts: &FitOptions<f64>) -> Option<(f64, f64)> {
    let fits: Vec<FitResult<f64>> = [ModelKind::Eit, ModelKind::Ats]
        .iter()
        .map(|&k| accept_best_effort(fit_model(spectrum, k, opts)))
        .collect::<Result<_, _>>()
        .ok()?;
    let report = aic_weights(&fits, AicCorrection::None).ok()?;
    Some((
        report.weight_of(ModelKind::Eit)?,
        report.weight_of(ModelKind::Ats)?,
    ))
}

fn discrimination() -> Outcome {
    let s = synthetic();
    let mut pass = true;
    let mut detail = Vec::new();
    let sigma = sigma_for_snr(&s.eit, &s.grid, SNR_DB);
    for truth in [s.eit, s.ats] {
        let clean = model_spectrum(&truth, &s.grid);
        let sigma = sigma_for_snr(&truth, &s.grid, SNR_DB);
        let hits = (0..SEEDS)
            .filter(|&seed| {
                let w = weights(&add_noise(&clean, sigma, 1000 + seed), &s.options);
                match (truth.kind, w) {
                    (ModelKind::Eit, Some((e, _))) => e > WEIGHT_MIN,
                    (ModelKind::Ats, Some((_, a))) => a > WEIGHT_MIN,
                    _ => false,
                }
            })
            .count();
        pass &= hits as f64 >= SEED_FRACTION * SEEDS as f64;
        detail.push(format!(
            "{}-generated: {hits}/{SEEDS} with w > {WEIGHT_MIN}",
            truth.kind
        ));
    }
    let flat = ModelParams {
        first: Lorentzian {
            amplitude: 0.0,
            ..s.eit.first
        },
        second: Lorentzian {
            amplitude: 0.0,
            ..s.eit.second
        },
        ..s.eit
    };
    let clean = model_spectrum(&flat, &s.grid);
    let w: Vec<(f64, f64)> = (0..SEEDS)
        .filter_map(|seed| weights(&add_noise(&clean, sigma, 5000 + seed), &s.options))
        .collect();
    let mean_e = w.iter().map(|x| x.0).sum::<f64>() / w.len().max(1) as f64;
    let mean_a = w.iter().map(|x| x.1).sum::<f64>() / w.len().max(1) as f64;
    let in_band = w
        .iter()
        .filter(|x| (x.0 - 0.5).abs() <= NOISE_WEIGHT_BAND)
        .count();
    pass &= w.len() as u64 == SEEDS
        && (mean_e - 0.5).abs() <= NOISE_WEIGHT_BAND
        && (mean_a - 0.5).abs() <= NOISE_WEIGHT_BAND;
    detail.push(format!(
        "pure noise: mean w_EIT {mean_e:.3}, mean w_ATS {mean_a:.3} ({in_band}/{} seeds individually in band)",
        w.len()
    ));
    outcome(pass, detail.join("; "))
}

fn group_delay_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let w0 = mhz_2pi(rng.random_range(5000.0..8000.0));
        let l = rng.random_range(0.5..5.0);
        let line = |rng: &mut ChaCha8Rng, scale: f64| {
            let width = mhz_2pi(rng.random_range(0.05..2.0) * scale);
            Lorentzian {
                amplitude: rng.random_range(0.1..3.0) * width * SPEED_OF_LIGHT / (w0 * l),
                center: w0 + mhz_2pi(rng.random_range(-0.3..0.3)),
                width,
            }
        };
        let p = ModelParams {
            kind: ModelKind::Eit,
            first: line(&mut rng, 0.3),
            second: line(&mut rng, 1.0),
            baseline: BaselineParams {
                l_eff: l,
                alpha0: rng.random_range(0.0..1.0),
                phi0: rng.random_range(-3.0..3.0),
            },
        };
        let w = w0 + mhz_2pi(rng.random_range(-2.0..2.0));
        let h = 1e-6 * p.second.width;
        let dispersive = |v: f64| v * l / SPEED_OF_LIGHT * eval_susceptibility(&p, v).re / 2.0;
        let (wp, wm) = (w + h, w - h);
        let fd = l / SPEED_OF_LIGHT + (dispersive(wp) - dispersive(wm)) / (wp - wm);
        let an = phase_derivative(&p, w);
        worst = worst.max((fd - an).abs() / an.abs());
    }
    let vg: f64 = group_velocity(-19.8e-6, 10.3e-3).unwrap();

    let cfg = reference_lambda(0.062, 0.82);
    let grid = linspace(
        cfg.omega_13 - mhz_2pi(4.1),
        cfg.omega_13 + mhz_2pi(4.1),
        201,
    );
    let mapping = TransmissionMapping {
        baseline: BaselineParams {
            l_eff: 2.0,
            alpha0: 0.3,
            phi0: 0.7,
        },
        scale: -75818.0,
    };
    let trace = probe_sweep(&cfg, &grid, &mapping).unwrap();
    let opts = FitOptions {
        l_eff_guess: Some(2.3),
        ..FitOptions::default()
    };
    let (center, tau) = match accept_best_effort(fit_model(&trace, ModelKind::Eit, &opts)) {
        Ok(fit) => {
            let (c, t) = window_center(&fit);
            debug_assert_eq!(t, group_delay(&fit, c));
            (c, t)
        }
        Err(_) => (f64::NAN, f64::NAN),
    };
    outcome(
        worst <= FD_REL && ((vg / -520.0) - 1.0).abs() <= VG_REL && tau < 0.0,
        format!(
            "FD max rel {worst:.1e}; v_g = {:.4} km/s; τ_g = {:.3} µs at {:.4} MHz on the simulated Λ trace (Ωc/2π = 0.82 MHz)",
            vg / 1e3,
            tau * 1e6,
            mhz(center)
        ),
    )
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn reproducibility() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_eitbench");
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference.toml");
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let run = |args: &[&str]| {
        let status = Command::new(bin)
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .args(args)
            .output()
            .unwrap();
        status.status.success()
    };
    let mut snaps = Vec::new();
    for _ in 0..2 {
        let _ = std::fs::remove_dir_all(&out);
        let spectrum = out.join("spectrum_04.csv");
        let ok = run(&["--seed", "7", "simulate"])
            && run(&["--input", spectrum.to_str().unwrap(), "fit"]);
        if !ok {
            return outcome(false, "eitbench exited with failure");
        }
        snaps.push(snapshot(&out));
    }
    let same = snaps[0] == snaps[1];
    outcome(
        same,
        format!(
            "{} files from simulate + fit, byte-identical across two runs: {same}",
            snaps[0].len()
        ),
    )
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 12] = [
        ("decay-rate identity", decay_identity),
        ("reference decay rates", reference_rates),
        ("control frequency", control_frequency),
        ("peak ordering", peak_ordering),
        ("dark-state fidelity", boundary_fidelity),
        ("two-level oracle", two_level_oracle),
        ("density-matrix invariants", density_invariants),
        ("EIT suppression", suppression),
        ("fit round-trip", fit_recovery),
        ("model discrimination", discrimination),
        ("group delay", group_delay_checks),
        ("reproducibility", reproducibility),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} [{}] {name}: {} ({:.2} s)",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
