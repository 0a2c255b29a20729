//! Experiment runner for `mce-core`: every experiment is a subcommand that
//! renders a CSV document with `#` header comments.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod commands;
pub mod config;
pub mod csv;

use config::{normalize_key, parse_kv, ExperimentConfig};

/// Environment variable consulted when no worker count is configured.
pub const WORKERS_ENV: &str = "MCE_WORKERS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] mce_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(mce_core::Error::InvalidArgument(_) | mce_core::Error::InsufficientData(_)) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mce", version, about = "Monte Carlo Euler experiments for SDEs with superlinear drift")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat key=value configuration file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// cubic, ginzburg or gbm.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Model parameter or any other configuration key, as key=value.
    #[arg(long = "param", global = true, value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of consecutive seeds starting at --seed.
    #[arg(long, global = true)]
    pub seeds: Option<u64>,
    #[arg(long, global = true)]
    pub n_min: Option<usize>,
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Explicit comma-separated step counts, replacing --n-min/--n-max.
    #[arg(long, global = true)]
    pub steps: Option<String>,
    /// Sample count M (default N^2).
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    /// Payoff f(x) = x^p.
    #[arg(long, global = true)]
    pub payoff_power: Option<u32>,
    /// Worker threads (0 = available parallelism); falls back to MCE_WORKERS.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// desk or paper.
    #[arg(long, global = true)]
    pub scale: Option<String>,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// published, computed or a number.
    #[arg(long, global = true)]
    pub reference: Option<String>,
    /// Reference value cache file.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableWhich {
    Ginzburg,
    Cubic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagnoseKind {
    Dominator,
    Moments,
    OmegaProb,
    Divergence,
    Intro,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReferenceWhich {
    Gl,
    Cubic,
    Gbm,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Monte Carlo Euler estimates of E[X_1^2] for N = 2^0..2^9.
    Table {
        #[arg(long, value_enum)]
        which: TableWhich,
    },
    /// Median errors against effort N^3 with a fitted slope and order lines.
    Convergence {
        /// Fit a CSV with N or effort and abs_error columns instead of simulating.
        #[arg(long)]
        errors_file: Option<PathBuf>,
    },
    /// Dominator, moment, event-probability, divergence and intro-bound campaigns.
    Diagnose {
        #[arg(long, value_enum)]
        kind: DiagnoseKind,
    },
    /// Reference values for the experiments.
    Reference {
        #[arg(long, value_enum)]
        which: ReferenceWhich,
    },
    /// Checks the growth and Lipschitz conditions of a model on a grid.
    ValidateModel,
}

impl Command {
    pub fn label(&self) -> String {
        match self {
            Command::Table { which } => format!("table --which {}", value_name(which)),
            Command::Convergence { errors_file: None } => "convergence".into(),
            Command::Convergence { errors_file: Some(p) } => format!("convergence --errors-file {}", p.display()),
            Command::Diagnose { kind } => format!("diagnose --kind {}", value_name(kind)),
            Command::Reference { which } => format!("reference --which {}", value_name(which)),
            Command::ValidateModel => "validate-model".into(),
        }
    }
}

fn value_name(v: &impl ValueEnum) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

/// Rendered CSV plus whether an invariant was violated.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: String,
    pub violation: bool,
    pub out: Option<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.violation)
    }
}

/// Layers defaults, the configuration file, the environment worker fallback
/// and the flags.
pub fn resolve_config(common: &CommonArgs, defaults: &[(&str, &str)]) -> Result<ExperimentConfig, CliError> {
    let file = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_kv(&text)?
        }
        None => BTreeMap::new(),
    };
    let mut flags = BTreeMap::new();
    for p in &common.params {
        let Some((k, v)) = p.split_once('=') else {
            return Err(CliError::Usage(format!("--param expects key=value, got {p:?}")));
        };
        flags.insert(normalize_key(k), v.trim().to_string());
    }
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            flags.insert(k.to_string(), v);
        }
    };
    put("model", common.model.clone());
    put("seed", common.seed.map(|v| v.to_string()));
    put("seeds", common.seeds.map(|v| v.to_string()));
    put("n_min", common.n_min.map(|v| v.to_string()));
    put("n_max", common.n_max.map(|v| v.to_string()));
    put("steps", common.steps.clone());
    put("samples", common.samples.map(|v| v.to_string()));
    put("payoff_power", common.payoff_power.map(|v| v.to_string()));
    put("workers", common.workers.map(|v| v.to_string()));
    put("scale", common.scale.clone());
    put("out", common.out.as_ref().map(|p| p.display().to_string()));
    put("reference", common.reference.clone());
    put("cache", common.cache.as_ref().map(|p| p.display().to_string()));
    let mut cfg = ExperimentConfig::resolve(defaults, file, flags)?;
    if cfg.get("workers").is_none() {
        if let Ok(w) = std::env::var(WORKERS_ENV) {
            cfg.set("workers", w.trim());
        }
    }
    Ok(cfg)
}

/// Runs one parsed invocation without touching stdout or the output file.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    commands::dispatch(&cli.command, &cli.common)
}

/// Parses `args` (program name first) and runs them.
pub fn run_args<I, S>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli)
}
