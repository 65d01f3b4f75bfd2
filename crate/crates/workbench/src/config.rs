//! TOML run configuration.
//!
//! Every frequency-valued key carries its unit as a suffix: `_hz` (ordinary
//! frequency), `_mhz_2pi` (ordinary frequency in MHz) or `_rads` (angular).
//! Values are normalized to rad/s through [`eit_core::units::to_rads`] and
//! nowhere else.
//!
//! ```toml
//! [device]
//! n0_transition_mhz_2pi = 5648.0   # or omega_q_* for the bare qubit frequency
//! omega_r_mhz_2pi = 6485.0
//! chi_mhz_2pi = 1.54
//! t1_s = 35e-6                      # or gamma_q_*
//! gamma_c_mhz_2pi = 0.82
//! length_m = 10.3e-3
//!
//! [drive]
//! omega_d_mhz_2pi = 5646.6
//! rabi_mhz_2pi = 1.46
//! ```

use std::path::PathBuf;

use eit_core::fit::{AicCorrection, BaselineParams, FitOptions};
use eit_core::lambda::{LambdaConfig, TransmissionMapping};
use eit_core::polariton::{build_polaritons, DeviceParams, PolaritonDrive};
use eit_core::synth::linspace;
use eit_core::units::{rate_from_lifetime, to_rads, FreqUnit};
use serde::Serialize;
use thiserror::Error;
use toml::{Table, Value};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("config{}: field `{field}`: {message}", line.map(|l| format!(" line {l}")).unwrap_or_default())]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

/// Inclusive evenly spaced axis, rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }
}

/// Explicit Λ-system values replacing the ones derived from the polaritons.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LambdaOverrides {
    pub omega_13: Option<f64>,
    pub omega_23: Option<f64>,
    pub gamma_31: Option<f64>,
    pub gamma_32: Option<f64>,
    pub gamma_21: Option<f64>,
    pub gamma_phi2: Option<f64>,
    pub gamma_phi3: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaSection {
    pub overrides: LambdaOverrides,
    pub probe_rabi: f64,
    pub control_rabi: f64,
    /// Control strengths for `simulate`; defaults to `[control_rabi]`.
    pub control_series: Vec<f64>,
    /// Exchange probe and control strengths before solving.
    pub role_swapped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeSweep {
    /// Absolute axis, or a span centred on ω13 when `centered` is set.
    pub axis: Axis,
    pub centered: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityScan {
    pub probe: Axis,
    pub control: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum NoiseLevel {
    SnrDb(f64),
    Sigma(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseSection {
    pub level: NoiseLevel,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitSection {
    pub options: FitOptions<f64>,
    pub correction: AicCorrection,
    pub detrend: bool,
}

impl Default for FitSection {
    fn default() -> Self {
        Self {
            options: FitOptions::default(),
            correction: AicCorrection::None,
            detrend: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkbenchConfig {
    pub device: Option<DeviceParams<f64>>,
    pub drive: Option<PolaritonDrive<f64>>,
    pub lambda: Option<LambdaSection>,
    pub drive_sweep: Option<Axis>,
    pub probe_sweep: Option<ProbeSweep>,
    pub fidelity_scan: Option<FidelityScan>,
    pub mapping: Option<TransmissionMapping<f64>>,
    pub noise: Option<NoiseSection>,
    pub fit: FitSection,
    pub output_dir: Option<PathBuf>,
}

const SECTIONS: &[&str] = &[
    "device", "drive", "lambda", "sweep", "mapping", "noise", "fit", "output",
];

impl WorkbenchConfig {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let root: Table = toml::from_str(src).map_err(|e| ConfigError {
            line: e.span().map(|s| line_of(src, s.start)),
            field: "<syntax>".into(),
            message: e.message().to_string(),
        })?;
        for key in root.keys() {
            if !SECTIONS.contains(&key.as_str()) {
                return Err(ConfigError {
                    line: find_line(src, None, key),
                    field: key.clone(),
                    message: format!("unknown section (expected one of {})", SECTIONS.join(", ")),
                });
            }
        }
        let sec = |name: &'static str| Section::get(src, &root, name);

        let device = sec("device")?.map(|s| s.device()).transpose()?;
        let drive = sec("drive")?.map(|s| s.drive()).transpose()?;
        let lambda = sec("lambda")?.map(|s| s.lambda()).transpose()?;
        let (drive_sweep, probe_sweep, fidelity_scan) = match sec("sweep")? {
            Some(s) => s.sweeps()?,
            None => (None, None, None),
        };
        let mapping = sec("mapping")?.map(|s| s.mapping()).transpose()?;
        let noise = sec("noise")?.map(|s| s.noise()).transpose()?;
        let fit = sec("fit")?
            .map(|s| s.fit())
            .transpose()?
            .unwrap_or_default();
        let output_dir = match sec("output")? {
            Some(s) => {
                s.allow(&["dir"])?;
                s.string("dir")?.map(PathBuf::from)
            }
            None => None,
        };
        let cfg = Self {
            device,
            drive,
            lambda,
            drive_sweep,
            probe_sweep,
            fidelity_scan,
            mapping,
            noise,
            fit,
            output_dir,
        };
        cfg.validate(src)?;
        Ok(cfg)
    }

    fn validate(&self, src: &str) -> Result<(), ConfigError> {
        if let Some(d) = &self.device {
            d.validate().map_err(|e| ConfigError {
                line: find_line(src, Some("device"), ""),
                field: "device".into(),
                message: e.to_string(),
            })?;
        }
        if let Some(d) = &self.drive {
            d.validate().map_err(|e| ConfigError {
                line: find_line(src, Some("drive"), ""),
                field: "drive".into(),
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn require_device(&self) -> Result<(DeviceParams<f64>, PolaritonDrive<f64>), ConfigError> {
        let missing = |s: &str| ConfigError {
            line: None,
            field: s.into(),
            message: "section is required".into(),
        };
        Ok((
            self.device.ok_or_else(|| missing("device"))?,
            self.drive.ok_or_else(|| missing("drive"))?,
        ))
    }

    pub fn require_lambda(&self) -> Result<&LambdaSection, ConfigError> {
        self.lambda.as_ref().ok_or(ConfigError {
            line: None,
            field: "lambda".into(),
            message: "section is required".into(),
        })
    }

    /// Λ-system parameters: polariton-derived values with overrides applied.
    /// Without a device section every level and rate must be overridden.
    pub fn lambda_config(&self) -> Result<LambdaConfig<f64>, ConfigError> {
        let sec = self.require_lambda()?;
        let o = &sec.overrides;
        let derived = match (self.device, self.drive) {
            (Some(d), Some(dr)) => Some(LambdaConfig::from_polaritons(
                &build_polaritons(&d, &dr),
                0.0,
                0.0,
            )),
            _ => None,
        };
        let pick = |name: &str, v: Option<f64>, f: fn(&LambdaConfig<f64>) -> f64| {
            v.or(derived.as_ref().map(f)).ok_or_else(|| ConfigError {
                line: None,
                field: format!("lambda.{name}"),
                message: "required when [device]/[drive] are absent".into(),
            })
        };
        let omega_13 = pick("omega_13", o.omega_13, |c| c.omega_13)?;
        let omega_23 = pick("omega_23", o.omega_23, |c| c.omega_23)?;
        let mut cfg = LambdaConfig {
            omega_13,
            omega_23,
            gamma_31: pick("gamma_31", o.gamma_31, |c| c.gamma_31)?,
            gamma_32: pick("gamma_32", o.gamma_32, |c| c.gamma_32)?,
            gamma_21: pick("gamma_21", o.gamma_21, |c| c.gamma_21)?,
            gamma_phi2: o.gamma_phi2.unwrap_or(0.0),
            gamma_phi3: o.gamma_phi3.unwrap_or(0.0),
            probe_rabi: sec.probe_rabi,
            probe_omega: omega_13,
            control_rabi: sec.control_rabi,
            control_omega: omega_23,
        };
        if sec.role_swapped {
            cfg = cfg.role_swapped();
        }
        Ok(cfg)
    }

    /// Probe frequencies for `simulate`.
    pub fn probe_grid(&self, omega_13: f64) -> Result<Vec<f64>, ConfigError> {
        let s = self.probe_sweep.ok_or(ConfigError {
            line: None,
            field: "sweep.probe".into(),
            message: "section is required".into(),
        })?;
        let shift = if s.centered { omega_13 } else { 0.0 };
        Ok(linspace(
            s.axis.start + shift,
            s.axis.stop + shift,
            s.axis.points,
        ))
    }
}

fn line_of(src: &str, byte: usize) -> usize {
    src[..byte.min(src.len())].matches('\n').count() + 1
}

/// Line of `key` inside `[section]` (or of the section header itself when
/// `key` is empty). Dotted headers such as `[sweep.probe]` are matched whole.
fn find_line(src: &str, section: Option<&str>, key: &str) -> Option<usize> {
    let mut current: Option<String> = None;
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if let Some(h) = line.strip_prefix('[').and_then(|l| l.split(']').next()) {
            current = Some(h.trim().to_string());
            if key.is_empty() && section == Some(h.trim()) {
                return Some(i + 1);
            }
            continue;
        }
        if key.is_empty() || current.as_deref() != section {
            continue;
        }
        if let Some(rest) = line.strip_prefix(key) {
            if rest.trim_start().starts_with('=') {
                return Some(i + 1);
            }
        }
    }
    None
}

struct Section<'a> {
    src: &'a str,
    name: String,
    table: &'a Table,
}

type Sweeps = (Option<Axis>, Option<ProbeSweep>, Option<FidelityScan>);

impl<'a> Section<'a> {
    fn get(src: &'a str, root: &'a Table, name: &str) -> Result<Option<Self>, ConfigError> {
        match root.get(name) {
            None => Ok(None),
            Some(Value::Table(table)) => Ok(Some(Self {
                src,
                name: name.into(),
                table,
            })),
            Some(_) => Err(ConfigError {
                line: find_line(src, None, name),
                field: name.into(),
                message: "must be a table".into(),
            }),
        }
    }

    fn sub(&self, name: &str) -> Result<Option<Section<'a>>, ConfigError> {
        match self.table.get(name) {
            None => Ok(None),
            Some(Value::Table(table)) => Ok(Some(Section {
                src: self.src,
                name: format!("{}.{name}", self.name),
                table,
            })),
            Some(_) => Err(self.err(name, "must be a table")),
        }
    }

    fn line(&self, key: &str) -> Option<usize> {
        find_line(self.src, Some(&self.name), key)
            .or_else(|| find_line(self.src, Some(&self.name), ""))
    }

    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: self.line(key),
            field: format!("{}.{key}", self.name),
            message: message.into(),
        }
    }

    /// Rejects keys outside `allowed`; frequency stems are listed bare and
    /// match any unit suffix.
    fn allow_with_freqs(&self, freqs: &[&str], plain: &[&str]) -> Result<(), ConfigError> {
        for key in self.table.keys() {
            if plain.contains(&key.as_str()) {
                continue;
            }
            let stem_ok = FreqUnit::ALL.iter().any(|u| {
                key.strip_suffix(&format!("_{}", u.suffix()))
                    .is_some_and(|s| freqs.contains(&s))
            });
            if stem_ok {
                continue;
            }
            if freqs.contains(&key.as_str()) {
                return Err(self.err(key, "frequency needs a unit suffix: _hz, _mhz_2pi or _rads"));
            }
            return Err(self.err(key, "unknown key"));
        }
        Ok(())
    }

    fn allow(&self, plain: &[&str]) -> Result<(), ConfigError> {
        self.allow_with_freqs(&[], plain)
    }

    fn number_value(&self, key: &str, v: &Value) -> Result<f64, ConfigError> {
        let x = match v {
            Value::Float(f) => *f,
            Value::Integer(i) => *i as f64,
            _ => return Err(self.err(key, "must be a number")),
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(self.err(key, "must be finite"))
        }
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.table
            .get(key)
            .map(|v| self.number_value(key, v))
            .transpose()
    }

    fn string(&self, key: &str) -> Result<Option<String>, ConfigError> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(self.err(key, "must be a string")),
        }
    }

    fn boolean(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(_) => Err(self.err(key, "must be true or false")),
        }
    }

    fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(_) => Err(self.err(key, "must be a non-negative integer")),
        }
    }

    fn unit_key(&self, stem: &str) -> Result<Option<(String, FreqUnit)>, ConfigError> {
        let mut found = None;
        for u in FreqUnit::ALL {
            let k = format!("{stem}_{}", u.suffix());
            if self.table.contains_key(&k) {
                if let Some((prev, _)) = &found {
                    return Err(self.err(&k, format!("conflicts with `{prev}`")));
                }
                found = Some((k, u));
            }
        }
        Ok(found)
    }

    /// Frequency `stem` in rad/s.
    fn freq(&self, stem: &str) -> Result<Option<f64>, ConfigError> {
        match self.unit_key(stem)? {
            None => Ok(None),
            Some((k, u)) => Ok(Some(to_rads(self.number(&k)?.expect("key present"), u))),
        }
    }

    fn freq_list(&self, stem: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some((k, u)) = self.unit_key(stem)? else {
            return Ok(None);
        };
        match &self.table[&k] {
            Value::Array(items) => items
                .iter()
                .map(|v| self.number_value(&k, v).map(|x| to_rads(x, u)))
                .collect::<Result<_, _>>()
                .map(Some),
            _ => Err(self.err(&k, "must be an array of numbers")),
        }
    }

    fn req_freq(&self, stem: &str) -> Result<f64, ConfigError> {
        self.freq(stem)?.ok_or_else(|| {
            self.err(
                stem,
                "missing (give it with a _hz, _mhz_2pi or _rads suffix)",
            )
        })
    }

    fn req_number(&self, key: &str) -> Result<f64, ConfigError> {
        self.number(key)?.ok_or_else(|| self.err(key, "missing"))
    }

    fn device(&self) -> Result<DeviceParams<f64>, ConfigError> {
        self.allow_with_freqs(
            &[
                "n0_transition",
                "omega_q",
                "omega_r",
                "chi",
                "gamma_q",
                "gamma_c",
                "coupling_g",
                "anharmonicity_alpha",
            ],
            &["t1_s", "length_m"],
        )?;
        let chi = self.req_freq("chi")?;
        let omega_q = match (self.freq("n0_transition")?, self.freq("omega_q")?) {
            (Some(n0), None) => n0 + chi,
            (None, Some(q)) => q,
            (Some(_), Some(_)) => {
                return Err(self.err("omega_q", "give either n0_transition or omega_q, not both"))
            }
            (None, None) => {
                return Err(self.err("n0_transition", "missing (or give the bare omega_q)"))
            }
        };
        let gamma_q = match (self.freq("gamma_q")?, self.number("t1_s")?) {
            (Some(g), None) => g,
            (None, Some(t1)) if t1 > 0.0 => rate_from_lifetime(t1),
            (None, Some(_)) => return Err(self.err("t1_s", "must be > 0")),
            (Some(_), Some(_)) => {
                return Err(self.err("t1_s", "give either gamma_q or t1_s, not both"))
            }
            (None, None) => 0.0,
        };
        let mut d = DeviceParams::from_n0_transition(
            omega_q - chi,
            self.req_freq("omega_r")?,
            chi,
            gamma_q,
            self.req_freq("gamma_c")?,
            self.req_number("length_m")?,
        );
        d.omega_q = omega_q;
        d.coupling_g = self.freq("coupling_g")?.unwrap_or(0.0);
        d.anharmonicity_alpha = self.freq("anharmonicity_alpha")?.unwrap_or(0.0);
        Ok(d)
    }

    fn drive(&self) -> Result<PolaritonDrive<f64>, ConfigError> {
        self.allow_with_freqs(&["omega_d", "rabi"], &[])?;
        Ok(PolaritonDrive {
            omega_d: self.req_freq("omega_d")?,
            rabi: self.req_freq("rabi")?,
        })
    }

    fn lambda(&self) -> Result<LambdaSection, ConfigError> {
        const STEMS: [&str; 7] = [
            "omega_13",
            "omega_23",
            "gamma_31",
            "gamma_32",
            "gamma_21",
            "gamma_phi2",
            "gamma_phi3",
        ];
        let mut freqs: Vec<&str> = STEMS.to_vec();
        freqs.extend(["probe_rabi", "control_rabi", "control_series"]);
        self.allow_with_freqs(&freqs, &["role_swapped"])?;
        let mut v = [None; 7];
        for (slot, stem) in v.iter_mut().zip(STEMS) {
            *slot = self.freq(stem)?;
            if slot.is_some_and(|x| x < 0.0) {
                return Err(self.err(stem, "must be >= 0"));
            }
        }
        let overrides = LambdaOverrides {
            omega_13: v[0],
            omega_23: v[1],
            gamma_31: v[2],
            gamma_32: v[3],
            gamma_21: v[4],
            gamma_phi2: v[5],
            gamma_phi3: v[6],
        };
        let probe_rabi = self.freq("probe_rabi")?.unwrap_or(0.0);
        let control_rabi = self.freq("control_rabi")?.unwrap_or(0.0);
        for (k, x) in [("probe_rabi", probe_rabi), ("control_rabi", control_rabi)] {
            if x < 0.0 {
                return Err(self.err(k, "must be >= 0"));
            }
        }
        let control_series = self
            .freq_list("control_series")?
            .unwrap_or_else(|| vec![control_rabi]);
        if control_series.is_empty() || control_series.iter().any(|&x| x < 0.0) {
            return Err(self.err("control_series", "must be a non-empty list of values >= 0"));
        }
        Ok(LambdaSection {
            overrides,
            probe_rabi,
            control_rabi,
            control_series,
            role_swapped: self.boolean("role_swapped")?.unwrap_or(false),
        })
    }

    fn axis(&self) -> Result<Axis, ConfigError> {
        self.allow_with_freqs(&["start", "stop"], &["points"])?;
        let axis = Axis {
            start: self.req_freq("start")?,
            stop: self.req_freq("stop")?,
            points: self
                .count("points")?
                .ok_or_else(|| self.err("points", "missing"))?,
        };
        if axis.points < 2 || !(axis.stop > axis.start) {
            return Err(self.err("points", "axis needs points >= 2 and stop > start"));
        }
        Ok(axis)
    }

    fn sweeps(&self) -> Result<Sweeps, ConfigError> {
        self.allow(&["drive", "probe", "fidelity"])?;
        let drive = self.sub("drive")?.map(|s| s.axis()).transpose()?;
        let probe = match self.sub("probe")? {
            None => None,
            Some(s) => {
                let span = s.freq("span")?;
                match span {
                    Some(span) => {
                        s.allow_with_freqs(&["span"], &["points"])?;
                        let points = s
                            .count("points")?
                            .ok_or_else(|| s.err("points", "missing"))?;
                        if points < 2 || !(span > 0.0) {
                            return Err(s.err("span", "needs span > 0 and points >= 2"));
                        }
                        Some(ProbeSweep {
                            axis: Axis {
                                start: -span / 2.0,
                                stop: span / 2.0,
                                points,
                            },
                            centered: true,
                        })
                    }
                    None => Some(ProbeSweep {
                        axis: s.axis()?,
                        centered: false,
                    }),
                }
            }
        };
        let fidelity = match self.sub("fidelity")? {
            None => None,
            Some(s) => {
                s.allow(&["probe", "control"])?;
                let probe = s
                    .sub("probe")?
                    .ok_or_else(|| s.err("probe", "missing"))?
                    .axis()?;
                let control = s
                    .sub("control")?
                    .ok_or_else(|| s.err("control", "missing"))?
                    .axis()?;
                Some(FidelityScan { probe, control })
            }
        };
        Ok((drive, probe, fidelity))
    }

    fn mapping(&self) -> Result<TransmissionMapping<f64>, ConfigError> {
        self.allow_with_freqs(&["scale"], &["l_eff_m", "alpha0", "phi0_rad"])?;
        let l_eff = self.req_number("l_eff_m")?;
        if !(l_eff > 0.0) {
            return Err(self.err("l_eff_m", "must be > 0"));
        }
        Ok(TransmissionMapping {
            baseline: BaselineParams {
                l_eff,
                alpha0: self.number("alpha0")?.unwrap_or(0.0),
                phi0: self.number("phi0_rad")?.unwrap_or(0.0),
            },
            scale: self.req_freq("scale")?,
        })
    }

    fn noise(&self) -> Result<NoiseSection, ConfigError> {
        self.allow(&["snr_db", "sigma", "seed"])?;
        let level = match (self.number("snr_db")?, self.number("sigma")?) {
            (Some(s), None) => NoiseLevel::SnrDb(s),
            (None, Some(s)) if s >= 0.0 => NoiseLevel::Sigma(s),
            (None, Some(_)) => return Err(self.err("sigma", "must be >= 0")),
            _ => return Err(self.err("snr_db", "give exactly one of snr_db or sigma")),
        };
        let seed = match self.table.get("seed") {
            None => 0,
            Some(Value::Integer(i)) if *i >= 0 => *i as u64,
            Some(_) => return Err(self.err("seed", "must be a non-negative integer")),
        };
        Ok(NoiseSection { level, seed })
    }

    fn fit(&self) -> Result<FitSection, ConfigError> {
        self.allow(&[
            "phase_weight",
            "max_iterations",
            "starts",
            "l_eff_guess_m",
            "detrend",
            "aicc",
        ])?;
        let mut options = FitOptions::default();
        if let Some(w) = self.number("phase_weight")? {
            if !(w > 0.0) {
                return Err(self.err("phase_weight", "must be > 0"));
            }
            options.phase_weight = w;
        }
        if let Some(n) = self.count("max_iterations")? {
            options.max_iterations = n;
        }
        if let Some(n) = self.count("starts")? {
            options.starts = n.max(1);
        }
        if let Some(l) = self.number("l_eff_guess_m")? {
            if !(l > 0.0) {
                return Err(self.err("l_eff_guess_m", "must be > 0"));
            }
            options.l_eff_guess = Some(l);
        }
        let correction = if self.boolean("aicc")?.unwrap_or(false) {
            AicCorrection::Small
        } else {
            AicCorrection::None
        };
        Ok(FitSection {
            options,
            correction,
            detrend: self.boolean("detrend")?.unwrap_or(false),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use eit_core::units::mhz_2pi;

    const REFERENCE: &str = r#"
[device]
n0_transition_mhz_2pi = 5648.0
omega_r_mhz_2pi = 6485.0
chi_mhz_2pi = 1.54
t1_s = 35e-6
gamma_c_mhz_2pi = 0.82
length_m = 10.3e-3

[drive]
omega_d_mhz_2pi = 5646.6
rabi_mhz_2pi = 1.46
"#;

    #[test]
    fn parses_units() {
        let cfg = WorkbenchConfig::parse(REFERENCE).unwrap();
        let d = cfg.device.unwrap();
        assert_eq!(d.chi, mhz_2pi(1.54));
        assert_eq!(
            d.n0_transition(),
            mhz_2pi(5648.0) + mhz_2pi(1.54) - mhz_2pi(1.54)
        );
        assert_eq!(cfg.drive.unwrap().rabi, mhz_2pi(1.46));
        let hz = REFERENCE.replace("chi_mhz_2pi = 1.54", "chi_hz = 1.54e6");
        assert_eq!(
            WorkbenchConfig::parse(&hz).unwrap().device.unwrap().chi,
            eit_core::units::hz(1.54e6)
        );
    }

    #[test]
    fn missing_suffix_is_reported_with_line() {
        let bad = REFERENCE.replace("chi_mhz_2pi", "chi");
        let e = WorkbenchConfig::parse(&bad).unwrap_err();
        assert_eq!(e.line, Some(5));
        assert_eq!(e.field, "device.chi");
        assert!(e.message.contains("unit suffix"));
    }

    #[test]
    fn unknown_key_and_conflicts() {
        let e = WorkbenchConfig::parse(&format!("{REFERENCE}\n[noise]\nsnr = 3\n")).unwrap_err();
        assert_eq!(e.field, "noise.snr");
        assert_eq!(e.line, Some(15));
        let e = WorkbenchConfig::parse(&REFERENCE.replace("length_m", "chi_hz = 1.0\nlength_m"))
            .unwrap_err();
        assert!(e.message.contains("conflicts"));
    }

    #[test]
    fn syntax_error_has_line() {
        let e = WorkbenchConfig::parse("[device]\nchi_hz = = 1\n").unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn lambda_overrides_replace_formula_values() {
        let src = format!("{REFERENCE}\n[lambda]\ngamma_31_mhz_2pi = 0.35\ncontrol_rabi_mhz_2pi = 0.82\nrole_swapped = true\n");
        let cfg = WorkbenchConfig::parse(&src).unwrap();
        let l = cfg.lambda_config().unwrap();
        assert_eq!(l.gamma_31, mhz_2pi(0.35));
        assert_eq!(l.probe_rabi, mhz_2pi(0.82));
        assert_eq!(l.control_rabi, 0.0);
    }

    #[test]
    fn centred_probe_span() {
        let src = format!("{REFERENCE}\n[sweep.probe]\nspan_mhz_2pi = 6.0\npoints = 3\n");
        let cfg = WorkbenchConfig::parse(&src).unwrap();
        let g = cfg.probe_grid(100.0).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[1], 100.0);
    }
}
