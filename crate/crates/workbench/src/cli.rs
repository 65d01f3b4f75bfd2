use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use eit_core::fit::ModelKind;

use crate::commands::{self, Context};
use crate::config::WorkbenchConfig;
use crate::error::WorkbenchError;
use crate::report::{sha256_hex, Inputs};

#[derive(Debug, Parser)]
#[command(
    name = "eitbench",
    version,
    about = "Polariton EIT simulation, fitting and model discrimination"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Input file: spectrum CSV (fit), manifest CSV (discriminate) or fit report JSON (groupdelay).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = ModelChoice::Both)]
    pub model: ModelChoice,
    /// Propagation length for group velocity, metres.
    #[arg(long, global = true)]
    pub length: Option<f64>,
    /// Noise seed; overrides `[noise] seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory; overrides `[output] dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Polariton levels, decay rates and probe transitions.
    Polariton,
    /// Steady-state probe spectra, one CSV per control strength.
    Simulate,
    /// Fit EIT and/or ATS models to a spectrum CSV.
    Fit,
    /// EIT/ATS Akaike weights over a manifest of spectra.
    Discriminate,
    /// Group delay and velocity from an EIT fit report.
    Groupdelay,
    /// Steady-state dark-state fidelity.
    Fidelity,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Polariton => "polariton",
            Command::Simulate => "simulate",
            Command::Fit => "fit",
            Command::Discriminate => "discriminate",
            Command::Groupdelay => "groupdelay",
            Command::Fidelity => "fidelity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Eit,
    Ats,
    Both,
}

impl ModelChoice {
    pub fn kinds(self) -> Vec<ModelKind> {
        match self {
            ModelChoice::Eit => vec![ModelKind::Eit],
            ModelChoice::Ats => vec![ModelKind::Ats],
            ModelChoice::Both => vec![ModelKind::Eit, ModelKind::Ats],
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModelChoice::Eit => "eit",
            ModelChoice::Ats => "ats",
            ModelChoice::Both => "both",
        }
    }
}

fn load_config(path: &Path) -> Result<(WorkbenchConfig, String), WorkbenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| WorkbenchError::io(path, e))?;
    Ok((WorkbenchConfig::parse(&text)?, text))
}

/// Runs one subcommand; returns the summary lines for the terminal.
pub fn run(cli: &Cli) -> Result<Vec<String>, WorkbenchError> {
    let loaded = cli.config.as_deref().map(load_config).transpose()?;
    let (config, text) = match loaded {
        Some((c, t)) => (Some(c), Some(t)),
        None => (None, None),
    };
    let out = cli
        .out
        .clone()
        .or_else(|| config.as_ref().and_then(|c| c.output_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("out"));
    let inputs = Inputs {
        config_sha256: text.as_deref().map(|t| sha256_hex(t.as_bytes())),
        config: config
            .as_ref()
            .map(|c| serde_json::to_value(c).expect("config serializes")),
        config_text: text,
        input: None,
        model: matches!(cli.command, Command::Fit).then(|| cli.model.name().to_string()),
        length_m: cli.length,
        seed: cli.seed,
    };
    let ctx = Context {
        config,
        inputs,
        input: cli.input.clone(),
        model: cli.model,
        length: cli.length,
        seed: cli.seed,
        out,
    };
    match cli.command {
        Command::Polariton => commands::polariton::run(&ctx),
        Command::Simulate => commands::simulate::run(&ctx),
        Command::Fit => commands::fit::run(&ctx),
        Command::Discriminate => commands::discriminate::run(&ctx),
        Command::Groupdelay => commands::groupdelay::run(&ctx),
        Command::Fidelity => commands::fidelity::run(&ctx),
    }
}
