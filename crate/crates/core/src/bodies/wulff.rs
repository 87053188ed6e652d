use serde::{Deserialize, Serialize};

use super::lp::{solve_support_lp, LpSolution};
use crate::error::{Error, Result};
use crate::sphere::SphericalGrid;
use crate::util::{dot, norm};

/// Slack allowed in `(x, y_j) ≤ f_j` when testing membership.
const MEMBERSHIP_TOL: f64 = 1e-12;

/// Outer polyhedral approximation `{x : (x, y_j) ≤ f_j}` of a Wulff shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WulffShape {
    pub directions: Vec<Vec<f64>>,
    pub gauge: Vec<f64>,
}

impl WulffShape {
    pub fn new(directions: Vec<Vec<f64>>, gauge: Vec<f64>) -> Result<Self> {
        let shape = WulffShape { directions, gauge };
        shape.validate()?;
        Ok(shape)
    }

    pub fn validate(&self) -> Result<()> {
        if self.directions.is_empty() {
            return Err(Error::domain("Wulff shape needs at least one direction"));
        }
        if self.directions.len() != self.gauge.len() {
            return Err(Error::domain(
                "directions and gauge values differ in length",
            ));
        }
        let n = self.directions[0].len();
        for y in &self.directions {
            if y.len() != n || (norm(y) - 1.0).abs() > 1e-10 {
                return Err(Error::domain(
                    "Wulff directions must be unit vectors of equal dimension",
                ));
            }
        }
        if self.gauge.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(Error::domain(
                "gauge values must be finite and non-negative",
            ));
        }
        Ok(())
    }

    /// Samples `gauge` at `directions`.
    pub fn from_gauge<F>(directions: Vec<Vec<f64>>, gauge: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<f64>,
    {
        let values = directions
            .iter()
            .map(|y| gauge(y))
            .collect::<Result<Vec<_>>>()?;
        WulffShape::new(directions, values)
    }

    pub fn dimension(&self) -> usize {
        self.directions[0].len()
    }

    /// Support function of the outer approximation at `u`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        Ok(self.support_point(u)?.value)
    }

    /// Optimal value and a maximizer of `(x, u)`.
    pub fn support_point(&self, u: &[f64]) -> Result<LpSolution> {
        if u.len() != self.dimension() {
            return Err(Error::domain("direction of wrong dimension"));
        }
        solve_support_lp(&self.directions, &self.gauge, u)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.directions
            .iter()
            .zip(&self.gauge)
            .all(|(y, f)| dot(x, y) <= f + MEMBERSHIP_TOL * (1.0 + f.abs()))
    }
}

/// Grid nodes, optionally augmented with `±e_i` when not already present.
pub fn direction_set(grid: &SphericalGrid, with_axes: bool) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = grid.nodes().to_vec();
    if with_axes {
        add_axes(&mut dirs, grid.dimension());
    }
    dirs
}

fn add_axes(dirs: &mut Vec<Vec<f64>>, n: usize) {
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            let present = dirs
                .iter()
                .any(|y| y.iter().zip(&e).all(|(a, b)| (a - b).abs() < 1e-14));
            if !present {
                dirs.push(e);
            }
        }
    }
}

/// The `2n` coordinate directions `±e_i`.
pub fn axis_directions(n: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::with_capacity(2 * n);
    add_axes(&mut dirs, n);
    dirs
}

/// `max (x, u)` subject to `(x, y_j) ≤ f_j` for all `j`.
pub fn wulff_support_upper(directions: &[Vec<f64>], gauge: &[f64], u: &[f64]) -> Result<f64> {
    if (norm(u) - 1.0).abs() > 1e-10 {
        return Err(Error::domain("u must be a unit vector"));
    }
    Ok(solve_support_lp(directions, gauge, u)?.value)
}

/// Membership in the outer approximation.
pub fn wulff_membership(directions: &[Vec<f64>], gauge: &[f64], x: &[f64]) -> bool {
    directions
        .iter()
        .zip(gauge)
        .all(|(y, f)| dot(x, y) <= f + MEMBERSHIP_TOL * (1.0 + f.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::GridMethod;

    fn grid3() -> SphericalGrid {
        SphericalGrid::build(3, 6, GridMethod::ProductAngular, 0).unwrap()
    }

    #[test]
    fn constant_gauge_gives_ball() {
        let g = grid3();
        let dirs = direction_set(&g, true);
        let gauge = vec![2.0; dirs.len()];
        for u in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8]] {
            let v = wulff_support_upper(&dirs, &gauge, &u).unwrap();
            assert!(v >= 2.0 - 1e-8, "{v}");
        }
        let v = wulff_support_upper(&dirs, &gauge, &[1.0, 0.0, 0.0]).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
        let v = wulff_support_upper(&dirs, &gauge, &dirs[7]).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
    }

    #[test]
    fn box_gauge_reproduces_box() {
        let g = grid3();
        let dirs = direction_set(&g, true);
        let gauge: Vec<f64> = dirs
            .iter()
            .map(|y| y.iter().map(|v| v.abs()).sum())
            .collect();
        let v = wulff_support_upper(&dirs, &gauge, &[1.0, 0.0, 0.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-8);
        // A box is its own Wulff shape: exact at every constraint direction.
        for y in dirs.iter().step_by(11) {
            let v = wulff_support_upper(&dirs, &gauge, y).unwrap();
            let h: f64 = y.iter().map(|c| c.abs()).sum();
            assert!((v - h).abs() < 1e-8, "{v} vs {h}");
        }
    }

    #[test]
    fn refinement_is_monotone() {
        let coarse = SphericalGrid::build(3, 3, GridMethod::ProductAngular, 0).unwrap();
        let fine = SphericalGrid::build(3, 6, GridMethod::ProductAngular, 0).unwrap();
        let u = [0.3, -0.5, (1.0f64 - 0.34).sqrt()];
        let val = |g: &SphericalGrid| {
            let mut dirs = direction_set(g, true);
            // Nested direction sets: the fine set contains the coarse one.
            if g.len() == fine.len() {
                dirs.extend(direction_set(&coarse, true));
            }
            let gauge = vec![1.0; dirs.len()];
            wulff_support_upper(&dirs, &gauge, &u).unwrap()
        };
        assert!(val(&fine) <= val(&coarse) + 1e-12);
    }

    #[test]
    fn membership() {
        let g = grid3();
        let dirs = direction_set(&g, true);
        let ones = vec![1.0; dirs.len()];
        assert!(wulff_membership(&dirs, &ones, &[0.0, 0.0, 0.0]));
        assert!(!wulff_membership(&dirs, &ones, &[1.01, 0.0, 0.0]));
        let d2 = axis_directions(2);
        let box_gauge: Vec<f64> = d2.iter().map(|y| y.iter().map(|v| v.abs()).sum()).collect();
        assert!(wulff_membership(&d2, &box_gauge, &[1.0, 1.0]));
    }

    #[test]
    fn maximizer_is_feasible() {
        let dirs = direction_set(&grid3(), true);
        let gauge: Vec<f64> = dirs.iter().map(|y| 1.0 + 0.3 * y[2] * y[2]).collect();
        let u = [0.48, 0.6, 0.64];
        let sol = solve_support_lp(&dirs, &gauge, &u).unwrap();
        assert!(wulff_membership(
            &dirs,
            &gauge,
            &sol.point.iter().map(|v| v - 1e-10).collect::<Vec<_>>()
        ));
        assert!((dot(&sol.point, &u) - sol.value).abs() < 1e-9);
    }
}
