use serde::{Deserialize, Serialize};

use super::{Conclusion, Verdict, VerdictMethod};
use crate::bodies::{direction_set, p_mean, solve_support_lp, Body, PMeanSpec};
use crate::error::{Error, Result};
use crate::intrinsic::{intrinsic_volume, kappa};
use crate::sphere::SphericalGrid;
use crate::util::map_indexed;

/// Relative tolerance for the `V_1` comparison.
const V1_TOL: f64 = 1e-9;

/// `V_1((1−t)·K_0 +_p t·K_1) ≤ M_p(V_1(K_0), V_1(K_1))`, checked with one
/// quadrature measure on both sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct V1Report {
    /// `lhs`: `(1/κ_{n−1}) Σ w_j g(u_j)` for the `p`-mean gauge `g ≥ h_{K_p}`.
    /// `rhs`: the `p`-mean of the quadrature values of `V_1(K_0)`, `V_1(K_1)`.
    pub verdict: Verdict,
    pub v1_k0: f64,
    pub v1_k1: f64,
    /// Closed-form `V_1(K_0)`, `V_1(K_1)` where available.
    pub v1_k0_exact: Option<f64>,
    pub v1_k1_exact: Option<f64>,
    /// Quadrature of the outer Wulff support (an over-estimate of `V_1(K_p)`).
    pub wulff_estimate: Option<f64>,
    /// `|margin| ≤ tolerance`.
    pub equality: bool,
}

/// `V_1(K) = (1/κ_{n−1}) ∫ h_K`, discretized on `grid`.
fn v1_quadrature(body: &Body, grid: &SphericalGrid) -> Result<f64> {
    let n = grid.dimension();
    let values = grid.map_nodes(|u, _| body.support(u))?;
    Ok(grid.weighted_sum(&values) / kappa(n - 1))
}

pub fn v1_reverse_check(
    k0: &Body,
    k1: &Body,
    p: f64,
    t: f64,
    grid: &SphericalGrid,
    with_wulff: bool,
) -> Result<V1Report> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain(format!("p = {p} outside [0, 1)")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside [0, 1]")));
    }
    let n = grid.dimension();
    let spec = PMeanSpec::new(p, t, k0.clone(), k1.clone())?;
    let gauge = grid.map_nodes(|u, _| spec.support(u))?;
    let lhs = grid.weighted_sum(&gauge) / kappa(n - 1);
    let v1_k0 = v1_quadrature(k0, grid)?;
    let v1_k1 = v1_quadrature(k1, grid)?;
    let rhs = p_mean(p, t, v1_k0, v1_k1)?;
    let margin = rhs - lhs;
    let tolerance = V1_TOL * rhs.abs().max(1.0);
    let conclusion = if margin >= -tolerance {
        Conclusion::InequalityHolds
    } else {
        Conclusion::Inconclusive
    };
    let exact = |b: &Body| intrinsic_volume(b, n, 1, None).ok().map(|r| r.value);
    let wulff_estimate = if with_wulff {
        let dirs = direction_set(grid, true);
        let g = spec.gauge_on(&dirs)?;
        let outer = map_indexed(grid.len(), |i| {
            solve_support_lp(&dirs, &g, &grid.nodes()[i]).map(|s| s.value)
        });
        let outer = outer.into_iter().collect::<Result<Vec<_>>>()?;
        Some(grid.weighted_sum(&outer) / kappa(n - 1))
    } else {
        None
    };
    Ok(V1Report {
        verdict: Verdict {
            lhs,
            rhs,
            margin,
            tolerance,
            method: VerdictMethod::GaugeQuadrature,
            conclusion,
        },
        v1_k0,
        v1_k1,
        v1_k0_exact: exact(k0),
        v1_k1_exact: exact(k1),
        wulff_estimate,
        equality: margin.abs() <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::GridMethod;

    fn grid() -> SphericalGrid {
        SphericalGrid::build(3, 8, GridMethod::ProductAngular, 0).unwrap()
    }

    #[test]
    fn homothetic_pairs_give_equality() {
        let g = grid();
        for p in [0.0, 0.3, 0.5] {
            let r = v1_reverse_check(
                &Body::Ball { radius: 1.0 },
                &Body::Ball { radius: 1.0 },
                p,
                0.5,
                &g,
                false,
            )
            .unwrap();
            assert!(r.equality && r.verdict.margin.abs() < 1e-9);
            let b = Body::Box {
                a: vec![1.0, 2.0, 0.5],
            };
            let r = v1_reverse_check(&b, &b.dilate(3.0).unwrap(), p, 0.3, &g, false).unwrap();
            assert!(r.equality, "{r:?}");
        }
    }

    #[test]
    fn zero_factor_gives_equality() {
        let g = grid();
        let zero = Body::Box { a: vec![0.0; 3] };
        for p in [0.0, 0.5] {
            let r =
                v1_reverse_check(&zero, &Body::Ball { radius: 2.0 }, p, 0.5, &g, false).unwrap();
            assert!(r.equality, "{r:?}");
            assert_eq!(r.verdict.conclusion, Conclusion::InequalityHolds);
        }
    }

    #[test]
    fn box_versus_ball_is_strict() {
        let g = grid();
        let r = v1_reverse_check(
            &Body::Box { a: vec![1.0; 3] },
            &Body::Ball { radius: 1.0 },
            0.5,
            0.5,
            &g,
            true,
        )
        .unwrap();
        assert_eq!(r.verdict.conclusion, Conclusion::InequalityHolds);
        assert!(r.verdict.margin > r.verdict.tolerance);
        assert!((r.v1_k1 - r.v1_k1_exact.unwrap()).abs() < 1e-9);
        // Kinks of the cube support limit quadrature accuracy.
        assert!((r.v1_k0 - 6.0).abs() < 0.06, "{}", r.v1_k0);
        assert!(r.wulff_estimate.unwrap() >= r.verdict.lhs - 1e-2);
    }
}
