use anyhow::Result;
use lpbm_core::sphere::SphericalGrid;
use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;

/// Bumped whenever a report field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub method: &'static str,
    pub resolution: usize,
    pub seed: u64,
    pub nodes: usize,
    /// SHA-256 of the nodes and weights.
    pub fingerprint: String,
}

impl From<&SphericalGrid> for GridInfo {
    fn from(g: &SphericalGrid) -> Self {
        GridInfo {
            method: g.method().as_str(),
            resolution: g.resolution(),
            seed: g.seed(),
            nodes: g.len(),
            fingerprint: g.fingerprint(),
        }
    }
}

/// What a subcommand hands back to the runner.
#[derive(Debug)]
pub struct Outcome {
    pub result: Value,
    pub grid: Option<GridInfo>,
    /// RFC-4180 CSV bytes, header included.
    pub csv: Vec<u8>,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
    /// Drives the exit code.
    pub success: bool,
}

#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub schema_version: u32,
    pub command: &'a str,
    pub library_version: &'static str,
    pub grid: Option<&'a GridInfo>,
    pub config: &'a ExperimentConfig,
    pub success: bool,
    pub result: &'a Value,
}

impl<'a> Report<'a> {
    pub fn new(command: &'a str, config: &'a ExperimentConfig, outcome: &'a Outcome) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            library_version: lpbm_core::VERSION,
            grid: outcome.grid.as_ref(),
            config,
            success: outcome.success,
            result: &outcome.result,
        }
    }
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}
