//! Support-function representations of convex bodies, `p`-mean combinations
//! of support functions, and Wulff shapes.

mod lp;
mod pmean;
mod wulff;

use serde::{Deserialize, Serialize};

pub use lp::{solve_support_lp, LpSolution};
pub use pmean::{minkowski_support, p_mean, pmean, PMeanSpec};
pub use wulff::{
    axis_directions, direction_set, wulff_membership, wulff_support_upper, WulffShape,
};

use crate::error::{Error, Result};
use crate::sphere::{Jet, SmoothField, SphericalGrid, TestFunction};
use crate::util::norm;

fn one() -> f64 {
    1.0
}

/// A convex body given through its support function on the sphere.
///
/// Serialized with a `type` tag, e.g. `{"type": "box", "a": [1, 1, 1]}`.
/// Coordinate indices (`axes`) are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Body {
    Ball {
        radius: f64,
    },
    /// `∏ [−a_i, a_i]`; zero half-lengths are allowed.
    Box {
        a: Vec<f64>,
    },
    /// `{|x_i| ≤ 1 for i ∈ axes, x_j = 0 otherwise}` in `ℝ^dimension`.
    EmbeddedCube {
        dimension: usize,
        axes: Vec<usize>,
    },
    /// `h = R e^{sψ}`.
    LogPerturbedBall {
        psi: TestFunction,
        s: f64,
        #[serde(default = "one")]
        radius: f64,
    },
    /// Outer polyhedral Wulff shape of sampled gauge values.
    WulffSampled {
        directions: Vec<Vec<f64>>,
        gauge: Vec<f64>,
    },
}

impl Body {
    pub fn ball(radius: f64) -> Result<Body> {
        let b = Body::Ball { radius };
        b.validate()?;
        Ok(b)
    }

    pub fn embedded_cube(dimension: usize, axes: Vec<usize>) -> Result<Body> {
        let b = Body::EmbeddedCube { dimension, axes };
        b.validate()?;
        Ok(b)
    }

    pub fn log_perturbed_ball(psi: TestFunction, s: f64) -> Result<Body> {
        let b = Body::LogPerturbedBall {
            psi,
            s,
            radius: 1.0,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn wulff(shape: WulffShape) -> Body {
        Body::WulffSampled {
            directions: shape.directions,
            gauge: shape.gauge,
        }
    }

    /// Checks the payload invariants; deserialized bodies should be validated.
    pub fn validate(&self) -> Result<()> {
        match self {
            Body::Ball { radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::domain("ball radius must be positive"));
                }
            }
            Body::Box { a } => {
                if a.is_empty() || a.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::domain(
                        "box half-lengths must be finite and non-negative",
                    ));
                }
            }
            Body::EmbeddedCube { dimension, axes } => {
                if *dimension == 0 {
                    return Err(Error::domain("embedded cube needs a positive dimension"));
                }
                let mut seen = vec![false; *dimension];
                for &i in axes {
                    if i >= *dimension || seen[i] {
                        return Err(Error::domain(format!(
                            "cube axes must be distinct indices below {dimension}"
                        )));
                    }
                    seen[i] = true;
                }
            }
            Body::LogPerturbedBall { psi, s, radius } => {
                if !psi.polynomial.is_even() {
                    return Err(Error::Precondition("ψ must be even".into()));
                }
                if !s.is_finite() || !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::domain("need finite s and positive radius"));
                }
            }
            Body::WulffSampled { directions, gauge } => {
                WulffShape {
                    directions: directions.clone(),
                    gauge: gauge.clone(),
                }
                .validate()?;
            }
        }
        Ok(())
    }

    /// Ambient dimension, if fixed by the payload (balls work in every dimension).
    pub fn dimension(&self) -> Option<usize> {
        match self {
            Body::Ball { .. } => None,
            Body::Box { a } => Some(a.len()),
            Body::EmbeddedCube { dimension, .. } => Some(*dimension),
            Body::LogPerturbedBall { psi, .. } => Some(psi.dimension()),
            Body::WulffSampled { directions, .. } => directions.first().map(Vec::len),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Body::Ball { .. } => "ball",
            Body::Box { .. } => "box",
            Body::EmbeddedCube { .. } => "embedded-cube",
            Body::LogPerturbedBall { .. } => "log-perturbed-ball",
            Body::WulffSampled { .. } => "wulff-sampled",
        }
    }

    /// Whether the support function is smooth (`q_matrix` is available).
    pub fn is_smooth(&self) -> bool {
        matches!(self, Body::Ball { .. } | Body::LogPerturbedBall { .. })
    }

    fn check_direction(&self, u: &[f64]) -> Result<()> {
        if let Some(n) = self.dimension() {
            if u.len() != n {
                return Err(Error::domain(format!(
                    "direction has dimension {}, body has {n}",
                    u.len()
                )));
            }
        }
        if (norm(u) - 1.0).abs() > 1e-10 {
            return Err(Error::domain("u must be a unit vector"));
        }
        Ok(())
    }

    /// `h_K(u)` for a unit vector `u`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        self.check_direction(u)?;
        Ok(match self {
            Body::Ball { radius } => *radius,
            Body::Box { a } => a.iter().zip(u).map(|(a, u)| a * u.abs()).sum(),
            Body::EmbeddedCube { axes, .. } => axes.iter().map(|&i| u[i].abs()).sum(),
            Body::LogPerturbedBall { psi, s, radius } => radius * (s * psi.value(u)).exp(),
            Body::WulffSampled { directions, gauge } => {
                solve_support_lp(directions, gauge, u)?.value
            }
        })
    }

    /// Second-order jet of a smooth ambient extension of `h` at `x`.
    pub fn support_jet(&self, x: &[f64]) -> Result<Jet> {
        self.check_direction(x)?;
        match self {
            Body::Ball { radius } => Ok(Jet::constant(x.len(), *radius)),
            Body::LogPerturbedBall { psi, s, radius } => {
                Ok(psi.jet(x).scale(*s).exp().scale(*radius))
            }
            other => Err(Error::Unsupported(format!(
                "{} has no smooth support function",
                other.kind()
            ))),
        }
    }

    /// `α K` for `α > 0`.
    pub fn dilate(&self, alpha: f64) -> Result<Body> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::domain("dilation factor must be positive"));
        }
        Ok(match self {
            Body::Ball { radius } => Body::Ball {
                radius: alpha * radius,
            },
            Body::Box { a } => Body::Box {
                a: a.iter().map(|v| alpha * v).collect(),
            },
            Body::EmbeddedCube { dimension, axes } => {
                let mut a = vec![0.0; *dimension];
                for &i in axes {
                    a[i] = alpha;
                }
                Body::Box { a }
            }
            Body::LogPerturbedBall { psi, s, radius } => Body::LogPerturbedBall {
                psi: psi.clone(),
                s: *s,
                radius: alpha * radius,
            },
            Body::WulffSampled { directions, gauge } => Body::WulffSampled {
                directions: directions.clone(),
                gauge: gauge.iter().map(|g| alpha * g).collect(),
            },
        })
    }

    /// Largest `|h(u) − h(−u)|` over the grid nodes.
    pub fn evenness_defect(&self, grid: &SphericalGrid) -> Result<f64> {
        let mut worst = 0.0f64;
        for x in grid.nodes() {
            let minus: Vec<f64> = x.iter().map(|v| -v).collect();
            worst = worst.max((self.support(x)? - self.support(&minus)?).abs());
        }
        Ok(worst)
    }
}
