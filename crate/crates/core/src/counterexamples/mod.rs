//! Embedded-cube counterexamples to the `p`-Brunn-Minkowski inequality for
//! `V_k`, the threshold `p̄_k` below which they apply, and the reverse
//! inequality for `V_1`.
//!
//! `K_0` is the unit cube on the last `k` coordinates and `K_1` the unit cube
//! on the first `k`. Both have `V_k = 2^k`, while the `p`-sum
//! `½·K_0 +_p ½·K_1` sits inside a box whose half-lengths are the `p`-means of
//! the support values at `±e_i`. For small `p` that box already has
//! `V_k < 2^k`.

mod cubes;
mod reverse;
mod threshold;

use serde::{Deserialize, Serialize};

pub use cubes::{
    cube_pair, enclosing_box, sweep, upper_bound_vk_kp, verify_counterexample,
    verify_counterexample_at, wulff_containment_excess, CounterexampleInstance,
    CounterexampleVerdict, SweepRow, VkBound,
};
pub use reverse::{v1_reverse_check, V1Report};
pub use threshold::{threshold_pbar, threshold_table, Branch, Threshold};

/// Relative guard band for strict comparisons.
pub const GUARD_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    InequalityFails,
    InequalityHolds,
    Inconclusive,
}

impl Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Conclusion::InequalityFails => "inequality-fails",
            Conclusion::InequalityHolds => "inequality-holds",
            Conclusion::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictMethod {
    /// Exact `V_k` of an analytic enclosing box.
    AnalyticBound,
    /// Support values of the polyhedral outer Wulff approximation.
    WulffOuter,
    /// Quadrature of the `p`-mean gauge, which dominates the support function.
    GaugeQuadrature,
}

/// A checked inequality `lhs ≤ rhs` (or its failure).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    pub tolerance: f64,
    pub method: VerdictMethod,
    pub conclusion: Conclusion,
}
