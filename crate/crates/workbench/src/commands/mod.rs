pub mod discriminate;
pub mod fidelity;
pub mod fit;
pub mod groupdelay;
pub mod polariton;
pub mod simulate;

use std::path::{Path, PathBuf};

use eit_core::units::{from_rads, FreqUnit};
use serde::Serialize;

use crate::cli::ModelChoice;
use crate::config::{ConfigError, WorkbenchConfig};
use crate::error::WorkbenchError;
use crate::report::{to_json, write_atomic, Inputs, RunReport, ToolInfo, SCHEMA_VERSION};

pub struct Context {
    pub config: Option<WorkbenchConfig>,
    pub inputs: Inputs,
    pub input: Option<PathBuf>,
    pub model: ModelChoice,
    pub length: Option<f64>,
    pub seed: Option<u64>,
    pub out: PathBuf,
}

impl Context {
    pub fn config(&self) -> Result<&WorkbenchConfig, WorkbenchError> {
        self.config
            .as_ref()
            .ok_or_else(|| WorkbenchError::Usage("this command needs --config".into()))
    }

    pub fn input(&self) -> Result<&Path, WorkbenchError> {
        self.input
            .as_deref()
            .ok_or_else(|| WorkbenchError::Usage("this command needs --input".into()))
    }

    /// Writes the extra files and then the report; returns the report path.
    pub fn finish<R: Serialize>(
        &self,
        command: &str,
        inputs: Inputs,
        files: Vec<(String, Vec<u8>)>,
        result: R,
    ) -> Result<PathBuf, WorkbenchError> {
        for (name, bytes) in &files {
            write_atomic(&self.out, name, bytes)?;
        }
        let report = RunReport {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo::current(),
            command: command.into(),
            inputs,
            outputs: files.into_iter().map(|(n, _)| n).collect(),
            result,
        };
        write_atomic(&self.out, &format!("{command}.json"), &to_json(&report))
    }
}

pub(crate) fn warning_lines(warnings: &[String]) -> impl Iterator<Item = String> + '_ {
    warnings.iter().map(|w| format!("warning: {w}"))
}

/// Ordinary frequency in Hz.
pub(crate) fn to_hz(omega: f64) -> f64 {
    from_rads(omega, FreqUnit::Hz)
}

pub(crate) fn missing(field: &str) -> WorkbenchError {
    ConfigError {
        line: None,
        field: field.into(),
        message: "section is required".into(),
    }
    .into()
}

/// Renders rows as CSV text.
pub(crate) fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}
