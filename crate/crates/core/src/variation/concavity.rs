use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::path::VariationPath;
use crate::error::{Error, Result};
use crate::util::map_indexed;

/// Relative strictness tolerance: `tol = STRICTNESS · f_k(0)²`.
const STRICTNESS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConcavityVerdict {
    /// `H(s) < −tol` at every sample.
    StrictlyConcave,
    /// `H(s) ≤ tol` at every sample.
    Concave,
    /// First sample with `H(s) > tol`.
    Violated { s: f64 },
}

impl ConcavityVerdict {
    pub fn is_concave(&self) -> bool {
        !matches!(self, ConcavityVerdict::Violated { .. })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ConcavityVerdict::StrictlyConcave => "strictly-concave",
            ConcavityVerdict::Concave => "concave",
            ConcavityVerdict::Violated { .. } => "violated",
        }
    }
}

/// `H(s) = f_k f_k″ − (f_k′)²` on an `s`-grid; `H ≤ 0` iff `log f_k` is concave there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub n: usize,
    pub k: usize,
    pub s: Vec<f64>,
    pub f: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub h: Vec<f64>,
    pub f0: f64,
    pub tolerance: f64,
    pub verdict: ConcavityVerdict,
}

impl ConcavityReport {
    pub fn max_abs_h(&self) -> f64 {
        self.h.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Two columns `s,H` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,H\n");
        for (s, h) in self.s.iter().zip(&self.h) {
            let _ = writeln!(out, "{s:?},{h:?}");
        }
        out
    }
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Validates the path, then evaluates `H` at each `s` (all in `[−2, 2]`).
pub fn concavity_scan(path: &VariationPath, s_grid: &[f64]) -> Result<ConcavityReport> {
    concavity_scan_with_strictness(path, s_grid, STRICTNESS)
}

/// As [`concavity_scan`] with `tol = strictness · f_k(0)²`.
pub fn concavity_scan_with_strictness(
    path: &VariationPath,
    s_grid: &[f64],
    strictness: f64,
) -> Result<ConcavityReport> {
    if !(strictness >= 0.0 && strictness.is_finite()) {
        return Err(Error::domain("strictness must be finite and non-negative"));
    }
    if s_grid.is_empty() {
        return Err(Error::domain("empty s-grid"));
    }
    if s_grid.iter().any(|s| !(-2.0..=2.0).contains(s)) {
        return Err(Error::domain("scan points must lie in [-2, 2]"));
    }
    path.validate()?;
    let f0 = path.f_k(0.0)?;
    let tolerance = strictness * f0 * f0;
    // Points run sequentially here; each evaluation parallelizes over nodes.
    let evals = map_indexed(s_grid.len(), |i| path.evaluate(s_grid[i], 2));
    let evals = evals.into_iter().collect::<Result<Vec<_>>>()?;
    let f: Vec<f64> = evals.iter().map(|d| d.f).collect();
    let f1: Vec<f64> = evals.iter().map(|d| d.f1).collect();
    let f2: Vec<f64> = evals.iter().map(|d| d.f2.expect("order 2")).collect();
    let h: Vec<f64> = (0..f.len()).map(|i| f[i] * f2[i] - f1[i] * f1[i]).collect();
    let verdict = match h.iter().position(|&v| v > tolerance) {
        Some(i) => ConcavityVerdict::Violated { s: s_grid[i] },
        None if h.iter().all(|&v| v < -tolerance) => ConcavityVerdict::StrictlyConcave,
        None => ConcavityVerdict::Concave,
    };
    Ok(ConcavityReport {
        n: path.dimension(),
        k: path.k,
        s: s_grid.to_vec(),
        f,
        f1,
        f2,
        h,
        f0,
        tolerance,
        verdict,
    })
}
