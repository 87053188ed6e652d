use serde::{Deserialize, Serialize};

use super::threshold::{check_nk, threshold_pbar, Branch, Threshold};
use super::{Conclusion, Verdict, VerdictMethod, GUARD_BAND};
use crate::bodies::{direction_set, p_mean, solve_support_lp, Body, PMeanSpec};
use crate::error::{Error, Result};
use crate::intrinsic::vk_box;
use crate::sphere::SphericalGrid;
use crate::util::map_indexed;

/// `(K_0, K_1)`: unit cubes on the last `k` and the first `k` coordinates (0-based axes).
pub fn cube_pair(n: usize, k: usize) -> Result<(Body, Body)> {
    check_nk(n, k)?;
    let k0 = Body::embedded_cube(n, (n - k..n).collect())?;
    let k1 = Body::embedded_cube(n, (0..k).collect())?;
    Ok((k0, k1))
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p = {p} outside (0, 1)")));
    }
    Ok(())
}

/// One instance `(1−t)·K_0 +_p t·K_1` of the cube construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleInstance {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub t: f64,
    pub k0: Body,
    pub k1: Body,
    pub threshold: Threshold,
}

impl CounterexampleInstance {
    pub fn new(n: usize, k: usize, p: f64) -> Result<Self> {
        Self::with_t(n, k, p, 0.5)
    }

    pub fn with_t(n: usize, k: usize, p: f64, t: f64) -> Result<Self> {
        check_p(p)?;
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::domain(format!("t = {t} outside (0, 1)")));
        }
        let (k0, k1) = cube_pair(n, k)?;
        Ok(CounterexampleInstance {
            n,
            k,
            p,
            t,
            k0,
            k1,
            threshold: threshold_pbar(n, k)?,
        })
    }

    pub fn pmean_spec(&self) -> PMeanSpec {
        PMeanSpec {
            p: self.p,
            t: self.t,
            h0: self.k0.clone(),
            h1: self.k1.clone(),
        }
    }

    /// Half-lengths `a_i = M_p(h_{K_0}(e_i), h_{K_1}(e_i))`; the box contains the `p`-sum.
    pub fn enclosing_half_lengths(&self) -> Result<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                let mut e = vec![0.0; self.n];
                e[i] = 1.0;
                p_mean(self.p, self.t, self.k0.support(&e)?, self.k1.support(&e)?)
            })
            .collect()
    }
}

/// The enclosing box of `½·K_0 +_p ½·K_1`.
pub fn enclosing_box(n: usize, k: usize, p: f64) -> Result<Body> {
    let a = CounterexampleInstance::new(n, k, p)?.enclosing_half_lengths()?;
    Ok(Body::Box { a })
}

/// Upper bounds on `V_k` of the `p`-sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VkBound {
    pub half_lengths: Vec<f64>,
    /// `V_k` of the enclosing box (exact up to rounding); the certified bound.
    pub box_value: f64,
    /// The closed-form bound of the case analysis (`t = 1/2` only), for comparison.
    pub displayed_bound: Option<f64>,
}

fn displayed_bound(threshold: &Threshold, p: f64) -> f64 {
    let k = threshold.k as f64;
    match threshold.branch {
        Branch::Low => threshold.count as f64 * 2f64.powf(k - k / p),
        Branch::Middle | Branch::High => threshold.count as f64 * 2f64.powf(k - 1.0 / p),
    }
}

fn bound_for(inst: &CounterexampleInstance) -> Result<VkBound> {
    let half_lengths = inst.enclosing_half_lengths()?;
    let box_value = vk_box(&half_lengths, inst.k)?.value;
    let displayed_bound = (inst.t == 0.5).then(|| displayed_bound(&inst.threshold, inst.p));
    Ok(VkBound {
        half_lengths,
        box_value,
        displayed_bound,
    })
}

/// `V_k(½·K_0 +_p ½·K_1) ≤ V_k(enclosing box)`.
pub fn upper_bound_vk_kp(n: usize, k: usize, p: f64) -> Result<VkBound> {
    bound_for(&CounterexampleInstance::new(n, k, p)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleVerdict {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub t: f64,
    pub threshold: Threshold,
    pub below_threshold: bool,
    pub bound: VkBound,
    /// `((1−t)V_k(K_0)^{p/k} + t V_k(K_1)^{p/k})^{k/p} = 2^k`.
    pub vk_target: f64,
    /// `2^k − box_value`; positive certifies failure.
    pub vk_margin: f64,
    /// The same comparison on the `p/k`-power scale.
    pub verdict: Verdict,
}

/// Certifies failure of `V_k(K_p)^{p/k} ≥ ½V_k(K_0)^{p/k} + ½V_k(K_1)^{p/k}` via the box bound.
pub fn verify_counterexample(n: usize, k: usize, p: f64) -> Result<CounterexampleVerdict> {
    verify_counterexample_at(&CounterexampleInstance::new(n, k, p)?)
}

pub fn verify_counterexample_at(inst: &CounterexampleInstance) -> Result<CounterexampleVerdict> {
    let bound = bound_for(inst)?;
    let kf = inst.k as f64;
    let e = inst.p / kf;
    let vk_cube = 2f64.powi(inst.k as i32);
    let vk_target = ((1.0 - inst.t) * vk_cube.powf(e) + inst.t * vk_cube.powf(e)).powf(1.0 / e);
    let vk_margin = vk_target - bound.box_value;
    let conclusion = if vk_margin > GUARD_BAND * vk_target {
        Conclusion::InequalityFails
    } else {
        Conclusion::Inconclusive
    };
    let lhs = bound.box_value.powf(e);
    let rhs = (1.0 - inst.t) * vk_cube.powf(e) + inst.t * vk_cube.powf(e);
    Ok(CounterexampleVerdict {
        n: inst.n,
        k: inst.k,
        p: inst.p,
        t: inst.t,
        threshold: inst.threshold,
        below_threshold: inst.p < inst.threshold.value,
        bound,
        vk_target,
        vk_margin,
        verdict: Verdict {
            lhs,
            rhs,
            margin: rhs - lhs,
            tolerance: GUARD_BAND * rhs,
            method: VerdictMethod::AnalyticBound,
            conclusion,
        },
    })
}

/// One line of a threshold sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    pub branch: Branch,
    pub pbar: f64,
    pub p: f64,
    /// Certified upper bound on `V_k(K_p)`.
    pub lhs_bound: f64,
    /// `2^k`.
    pub rhs: f64,
    pub margin: f64,
    pub conclusion: Conclusion,
}

/// For each `(n, k)` with `n_min ≤ n ≤ n_max`, checks `p = f · p̄_k` for every
/// fraction `f`. Rows are ordered by `(n, k, f)`.
pub fn sweep(n_min: usize, n_max: usize, fractions: &[f64]) -> Result<Vec<SweepRow>> {
    let mut cases = Vec::new();
    for n in n_min.max(3)..=n_max {
        for k in 2..n {
            for &f in fractions {
                cases.push((n, k, f));
            }
        }
    }
    let rows = map_indexed(cases.len(), |i| -> Result<SweepRow> {
        let (n, k, f) = cases[i];
        let th = threshold_pbar(n, k)?;
        let v = verify_counterexample(n, k, f * th.value)?;
        Ok(SweepRow {
            n,
            k,
            branch: th.branch,
            pbar: th.value,
            p: v.p,
            lhs_bound: v.bound.box_value,
            rhs: v.vk_target,
            margin: v.vk_margin,
            conclusion: v.verdict.conclusion,
        })
    });
    rows.into_iter().collect()
}

/// Largest excess of the outer Wulff support of the `p`-sum over the
/// enclosing box support, across the grid nodes (≤ 0 up to LP tolerance).
pub fn wulff_containment_excess(n: usize, k: usize, p: f64, grid: &SphericalGrid) -> Result<f64> {
    if grid.dimension() != n {
        return Err(Error::domain("grid dimension differs from n"));
    }
    let inst = CounterexampleInstance::new(n, k, p)?;
    let a = inst.enclosing_half_lengths()?;
    let dirs = direction_set(grid, true);
    let gauge = inst.pmean_spec().gauge_on(&dirs)?;
    let excess = map_indexed(grid.len(), |i| -> Result<f64> {
        let u = &grid.nodes()[i];
        let outer = solve_support_lp(&dirs, &gauge, u)?.value;
        let boxed: f64 = a.iter().zip(u).map(|(a, u)| a * u.abs()).sum();
        Ok(outer - boxed)
    });
    let excess = excess.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(excess.into_iter().fold(f64::NEG_INFINITY, f64::max))
}
