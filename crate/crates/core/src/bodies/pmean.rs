use serde::{Deserialize, Serialize};

use super::Body;
use crate::error::{Error, Result};

/// `((1−t)a^p + t b^p)^{1/p}` for `p ∈ (0, 1]`, `a^{1−t} b^t` for `p = 0`.
///
/// For `p = 0` the value is 0 as soon as either argument is 0.
pub fn p_mean(p: f64, t: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("p = {p} outside [0, 1]")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside [0, 1]")));
    }
    if a < 0.0 || b < 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("p-means need finite non-negative values"));
    }
    if p == 0.0 {
        if a == 0.0 || b == 0.0 {
            // t ∈ {0, 1} selects a single factor.
            return Ok(if t == 0.0 {
                a
            } else if t == 1.0 {
                b
            } else {
                0.0
            });
        }
        return Ok(a.powf(1.0 - t) * b.powf(t));
    }
    if p == 1.0 {
        return Ok((1.0 - t) * a + t * b);
    }
    Ok(((1.0 - t) * a.powf(p) + t * b.powf(p)).powf(1.0 / p))
}

/// `α h_K(u) + β h_L(u)`.
pub fn minkowski_support(k: &Body, l: &Body, alpha: f64, beta: f64, u: &[f64]) -> Result<f64> {
    if alpha < 0.0 || beta < 0.0 {
        return Err(Error::domain("Minkowski coefficients must be non-negative"));
    }
    Ok(alpha * k.support(u)? + beta * l.support(u)?)
}

/// The gauge `u ↦ p-mean of h_0(u), h_1(u)` whose Wulff shape is `(1−t)·K_0 +_p t·K_1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PMeanSpec {
    pub p: f64,
    pub t: f64,
    pub h0: Body,
    pub h1: Body,
}

impl PMeanSpec {
    pub fn new(p: f64, t: f64, h0: Body, h1: Body) -> Result<Self> {
        p_mean(p, t, 1.0, 1.0)?;
        Ok(PMeanSpec { p, t, h0, h1 })
    }

    pub fn support(&self, u: &[f64]) -> Result<f64> {
        p_mean(self.p, self.t, self.h0.support(u)?, self.h1.support(u)?)
    }

    pub fn gauge_on(&self, directions: &[Vec<f64>]) -> Result<Vec<f64>> {
        directions.iter().map(|u| self.support(u)).collect()
    }
}

pub fn pmean(spec: &PMeanSpec, u: &[f64]) -> Result<f64> {
    spec.support(u)
}
