//! `lpbm`: reproducible experiments on intrinsic volumes and the
//! `p`-Brunn-Minkowski inequality.
//!
//! Exit codes: 0 on success, 1 when the computed verdict is negative
//! (see each subcommand), 2 on usage or evaluation errors.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;
use report::{Outcome, Report};

#[derive(Debug, Parser)]
#[command(
    name = "lpbm",
    version,
    about = "Intrinsic volumes and the p-Brunn-Minkowski inequality"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Intrinsic volumes V_k of a body (all k when --k is omitted).
    Vk,
    /// Log-concavity of s -> V_k(h e^{s psi}); exit 1 unless concave.
    Concavity,
    /// The threshold p̄_k for a range of dimensions.
    Thresholds,
    /// Certify failure of the inequality for embedded cubes (--sweep for a table).
    Counterexample,
    /// Residual of the L_p Christoffel-Minkowski equation with constant data.
    Christoffel,
    /// Poincaré ratio for an even test function; exit 1 if above 1 + tol.
    Poincare,
    /// Integration-by-parts identities for the symmetric-function cofactors.
    IbpCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Vk => "vk",
            Command::Concavity => "concavity",
            Command::Thresholds => "thresholds",
            Command::Counterexample => "counterexample",
            Command::Christoffel => "christoffel",
            Command::Poincare => "poincare",
            Command::IbpCheck => "ibp-check",
        }
    }
}

/// Each flag overrides the config key of the same name.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true)]
    pub t: Option<f64>,
    #[arg(long, global = true)]
    pub grid_res: Option<usize>,
    /// product-angular, monte-carlo or icosphere-n3.
    #[arg(long, global = true)]
    pub grid_method: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// x1sq, const, harmonic4, inline JSON, or a JSON file.
    #[arg(long, global = true)]
    pub psi: Option<String>,
    #[arg(long, global = true)]
    pub amplitude: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s_max: Option<f64>,
    #[arg(long, global = true)]
    pub s_steps: Option<usize>,
    /// Body as inline JSON or a JSON file, e.g. '{"type":"box","a":[1,1,1]}'.
    #[arg(long, global = true)]
    pub body: Option<String>,
    #[arg(long, global = true)]
    pub n_min: Option<usize>,
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Counterexample table over (n, k, fraction · p̄).
    #[arg(long, global = true)]
    pub sweep: bool,
    #[arg(long, global = true, value_delimiter = ',')]
    pub fractions: Option<Vec<f64>>,
    /// CSV output path.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// JSON report path.
    #[arg(long, global = true, value_name = "FILE")]
    pub json: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

impl Flags {
    fn as_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            subcommand: None,
            n: self.n,
            k: self.k,
            p: self.p,
            t: self.t,
            grid_res: self.grid_res,
            grid_method: self.grid_method.clone(),
            seed: self.seed,
            psi: self.psi.clone().map(serde_json::Value::String),
            amplitude: self.amplitude,
            s_min: self.s_min,
            s_max: self.s_max,
            s_steps: self.s_steps,
            body: self.body.clone().map(serde_json::Value::String),
            n_min: self.n_min,
            n_max: self.n_max,
            sweep: self.sweep.then_some(true),
            fractions: self.fractions.clone(),
            out: self.out.clone(),
            json: self.json.clone(),
            tol: self.tol,
        }
    }
}

/// File values, then flags, then the subcommand name.
pub fn resolve_config(cli: &Cli) -> Result<ExperimentConfig> {
    let base = match &cli.flags.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    let name = cli.command.name();
    if let Some(sub) = &base.subcommand {
        if sub != name {
            bail!("config file is for `{sub}` but `{name}` was invoked");
        }
    }
    let mut cfg = base.overlay(cli.flags.as_config());
    cfg.subcommand = Some(name.to_string());
    cfg.validate()?;
    Ok(cfg)
}

pub fn execute(command: Command, cfg: &ExperimentConfig) -> Result<Outcome> {
    match command {
        Command::Vk => commands::vk(cfg),
        Command::Concavity => commands::concavity(cfg),
        Command::Thresholds => commands::thresholds(cfg),
        Command::Counterexample => commands::counterexample(cfg),
        Command::Christoffel => commands::christoffel(cfg),
        Command::Poincare => commands::poincare(cfg),
        Command::IbpCheck => commands::ibp(cfg),
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::parse_from(args);
    let cfg = resolve_config(&cli)?;
    let outcome = execute(cli.command, &cfg)?;
    if let Some(path) = &cfg.out {
        std::fs::write(path, &outcome.csv)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &cfg.json {
        let report = Report::new(cli.command.name(), &cfg, &outcome);
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    for line in &outcome.summary {
        writeln!(stdout, "{line}")?;
    }
    Ok(if outcome.success { 0 } else { 1 })
}
