//! Experiment configuration: a JSON document whose keys mirror the long flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lpbm_core::bodies::Body;
use lpbm_core::sphere::{GridMethod, SphericalGrid, TestFunction};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Every field is optional; subcommands supply their own defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_res: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Alias (`x1sq`, `const`, `harmonic4`), a test-function object, or a path to one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_steps: Option<usize>,
    /// Body object (`{"type": "box", "a": [...]}`) or a path to one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fractions: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $(if $top.$field.is_some() { $base.$field = $top.$field; })*
    };
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `top` replace those of `self`.
    pub fn overlay(mut self, top: ExperimentConfig) -> Self {
        overlay!(
            self,
            top,
            subcommand,
            n,
            k,
            p,
            t,
            grid_res,
            grid_method,
            seed,
            psi,
            amplitude,
            s_min,
            s_max,
            s_steps,
            body,
            n_min,
            n_max,
            sweep,
            fractions,
            out,
            json,
            tol
        );
        self
    }

    /// Rejects values that no subcommand accepts, before any work starts.
    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                bail!("--p must lie in [0, 1], got {p}");
            }
        }
        if let Some(t) = self.t {
            if !(t > 0.0 && t < 1.0) {
                bail!("--t must lie in (0, 1), got {t}");
            }
        }
        if self.grid_res == Some(0) {
            bail!("--grid-res must be at least 1");
        }
        if let Some(m) = &self.grid_method {
            m.parse::<GridMethod>()?;
        }
        if let Some(tol) = self.tol {
            if !(tol >= 0.0 && tol.is_finite()) {
                bail!("--tol must be finite and non-negative, got {tol}");
            }
        }
        if let Some(a) = self.amplitude {
            if !a.is_finite() {
                bail!("--amplitude must be finite");
            }
        }
        if let (Some(lo), Some(hi)) = (self.s_min, self.s_max) {
            if lo > hi {
                bail!("--s-min ({lo}) exceeds --s-max ({hi})");
            }
        }
        for (name, s) in [("--s-min", self.s_min), ("--s-max", self.s_max)] {
            if let Some(s) = s {
                if !(-2.0..=2.0).contains(&s) {
                    bail!("{name} must lie in [-2, 2], got {s}");
                }
            }
        }
        if self.s_steps == Some(0) {
            bail!("--s-steps must be at least 1");
        }
        if let (Some(lo), Some(hi)) = (self.n_min, self.n_max) {
            if lo > hi {
                bail!("--n-min ({lo}) exceeds --n-max ({hi})");
            }
        }
        if let Some(fr) = &self.fractions {
            if fr.is_empty() || fr.iter().any(|f| !(*f > 0.0 && f.is_finite())) {
                bail!("--fractions must be a non-empty list of positive numbers");
            }
        }
        Ok(())
    }

    /// `n` from the flag, else from the body, else 3; the two must agree.
    pub fn dimension(&self, body: Option<&Body>) -> Result<usize> {
        let from_body = body.and_then(Body::dimension);
        let n = match (self.n, from_body) {
            (Some(n), Some(m)) if n != m => bail!("--n = {n} but the body lives in dimension {m}"),
            (Some(n), _) => n,
            (None, Some(m)) => m,
            (None, None) => 3,
        };
        if n < 2 {
            bail!("--n must be at least 2, got {n}");
        }
        Ok(n)
    }

    pub fn has_grid_settings(&self) -> bool {
        self.grid_res.is_some() || self.grid_method.is_some() || self.seed.is_some()
    }

    /// The reference grid for `n` unless any grid flag is set.
    pub fn grid(&self, n: usize) -> Result<SphericalGrid> {
        if !self.has_grid_settings() {
            return Ok(SphericalGrid::reference(n)?);
        }
        let method = match &self.grid_method {
            Some(m) => m.parse()?,
            None if n <= 6 => GridMethod::ProductAngular,
            None => GridMethod::MonteCarlo,
        };
        let res = self.grid_res.unwrap_or(match method {
            GridMethod::ProductAngular => SphericalGrid::reference_resolution(n),
            GridMethod::MonteCarlo => 20_000,
            GridMethod::IcosphereN3 => 6,
        });
        Ok(SphericalGrid::build(
            n,
            res,
            method,
            self.seed.unwrap_or(0),
        )?)
    }

    pub fn body(&self) -> Result<Option<Body>> {
        let Some(v) = &self.body else { return Ok(None) };
        let body: Body = serde_json::from_value(load_document(v, "body")?)
            .context("body must be a JSON object such as {\"type\": \"box\", \"a\": [1, 1, 1]}")?;
        body.validate()?;
        Ok(Some(body))
    }

    /// `ψ` in dimension `n`; `--amplitude` (else `default_amplitude` for aliases) scales it.
    pub fn psi(
        &self,
        n: usize,
        default_alias: &str,
        default_amplitude: f64,
    ) -> Result<TestFunction> {
        let spec = self
            .psi
            .clone()
            .unwrap_or_else(|| Value::String(default_alias.into()));
        let (tf, from_alias) = match &spec {
            Value::String(s) if is_alias(s) => (alias(s, n)?, true),
            other => {
                let tf: TestFunction = serde_json::from_value(load_document(other, "psi")?)
                    .context(
                        "psi must be an alias (x1sq, const, harmonic4) or a test-function object",
                    )?;
                (tf, false)
            }
        };
        if tf.dimension() != n {
            bail!("psi lives in dimension {} but n = {n}", tf.dimension());
        }
        Ok(match (self.amplitude, from_alias) {
            (Some(a), _) => tf.with_amplitude(a),
            (None, true) => tf.with_amplitude(default_amplitude),
            (None, false) => tf,
        })
    }
}

fn is_alias(s: &str) -> bool {
    matches!(s, "x1sq" | "const" | "harmonic4")
}

fn alias(s: &str, n: usize) -> Result<TestFunction> {
    Ok(match s {
        "x1sq" => TestFunction::centered_coordinate_square(n, 0)?,
        "const" => TestFunction::constant(n, 1.0),
        "harmonic4" => TestFunction::harmonic_quartic(n)?,
        _ => unreachable!("checked by is_alias"),
    })
}

/// Objects pass through; strings are inline JSON (starting with `{`) or file paths.
fn load_document(v: &Value, what: &str) -> Result<Value> {
    match v {
        Value::String(s) if s.trim_start().starts_with('{') => {
            serde_json::from_str(s).with_context(|| format!("parsing inline {what} JSON"))
        }
        Value::String(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {what} file {path}"))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {what} file {path}"))
        }
        other => Ok(other.clone()),
    }
}
