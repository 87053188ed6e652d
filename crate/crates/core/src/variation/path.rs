use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::intrinsic::{
    cofactor_general, elem_sym_all_general, second_cofactor_general, SymMatrix,
};
use crate::sphere::{SmoothField, SphericalGrid, TangentFrame, TestFunction};
use crate::util::binom;

/// Values of `s` at which `Q[h_s] > 0` is checked by [`VariationPath::validate`].
pub const VALIDITY_SAMPLES: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

/// Largest ambient dimension for which `f_k‴` is evaluated.
const THIRD_DERIVATIVE_MAX_N: usize = 5;

/// The path `h_s = h e^{sψ}` together with the order `k` and the quadrature grid.
#[derive(Debug, Clone)]
pub struct VariationPath {
    pub base: Body,
    pub psi: TestFunction,
    pub k: usize,
    pub grid: SphericalGrid,
}

/// `f_k(s)` and its first derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivatives {
    pub s: f64,
    pub f: f64,
    pub f1: f64,
    pub f2: Option<f64>,
    pub f3: Option<f64>,
}

#[derive(Default, Clone, Copy)]
struct NodeTerms {
    f: f64,
    f1: f64,
    f2: f64,
    f3: f64,
}

impl VariationPath {
    pub fn new(base: Body, psi: TestFunction, k: usize, grid: SphericalGrid) -> Result<Self> {
        let n = grid.dimension();
        if !base.is_smooth() {
            return Err(Error::Unsupported(format!(
                "variation paths need a smooth base body, got {}",
                base.kind()
            )));
        }
        if base.dimension().is_some_and(|d| d != n) || psi.dimension() != n {
            return Err(Error::domain("body, ψ and grid dimensions differ"));
        }
        if k < 1 || k > n {
            return Err(Error::domain(format!(
                "need 1 ≤ k ≤ n, got k = {k}, n = {n}"
            )));
        }
        if !psi.polynomial.is_even() {
            return Err(Error::Precondition("ψ must be even".into()));
        }
        Ok(VariationPath { base, psi, k, grid })
    }

    /// `h ≡ 1`.
    pub fn unit_ball(psi: TestFunction, k: usize, grid: SphericalGrid) -> Result<Self> {
        VariationPath::new(Body::Ball { radius: 1.0 }, psi, k, grid)
    }

    pub fn dimension(&self) -> usize {
        self.grid.dimension()
    }

    /// Checks `Q[h_s] > 0` at every node for each `s` in [`VALIDITY_SAMPLES`].
    pub fn validate(&self) -> Result<()> {
        for &s in &VALIDITY_SAMPLES {
            self.grid
                .map_nodes(|x, frame| self.node_terms(x, frame, s, 0))?;
        }
        Ok(())
    }

    fn node_terms(
        &self,
        x: &[f64],
        frame: &TangentFrame,
        s: f64,
        order: usize,
    ) -> Result<NodeTerms> {
        let k = self.k;
        let psi = self.psi.jet(x);
        let hs = self.base.support_jet(x)?.mul(&psi.scale(s).exp());
        let q = hs.q_matrix(frame);
        let q = (&q + q.transpose()) * 0.5;
        if q.clone().cholesky().is_none() {
            return Err(Error::PathValidity {
                s,
                node: x.to_vec(),
                min_eigenvalue: SymMatrix::symmetrized(q).min_eigenvalue(),
            });
        }
        let es = elem_sym_all_general(&q);
        let sk = es[k - 1];
        let d1 = hs.mul(&psi);
        let mut out = NodeTerms {
            f: hs.value * sk / k as f64,
            f1: d1.value * sk,
            ..NodeTerms::default()
        };
        if order < 2 {
            return Ok(out);
        }
        let d2 = d1.mul(&psi);
        let qd = d1.q_matrix(frame);
        let cof = if k >= 2 {
            cofactor_general(k - 1, &q)?
        } else {
            DMatrix::zeros(q.nrows(), q.ncols())
        };
        let lin1 = cof.component_mul(&qd).sum();
        out.f2 = d2.value * sk + d1.value * lin1;
        if order < 3 {
            return Ok(out);
        }
        let d3 = d2.mul(&psi);
        let qdd = d2.q_matrix(frame);
        let lin2 = cof.component_mul(&qdd).sum();
        let quad = if k >= 2 {
            second_cofactor_general(k - 1, &q)?.contract(&qd, &qd)
        } else {
            0.0
        };
        out.f3 = d3.value * sk + 2.0 * d2.value * lin1 + d1.value * quad + d1.value * lin2;
        Ok(out)
    }

    /// `f_k(s)` and derivatives up to `order ≤ 3` in one pass over the grid.
    pub fn evaluate(&self, s: f64, order: usize) -> Result<Derivatives> {
        if !s.is_finite() {
            return Err(Error::domain("s must be finite"));
        }
        if order > 3 {
            return Err(Error::domain("derivatives are available up to order 3"));
        }
        if order == 3 && self.dimension() > THIRD_DERIVATIVE_MAX_N {
            return Err(Error::UnsupportedScale(format!(
                "f_k''' is evaluated only for n ≤ {THIRD_DERIVATIVE_MAX_N}, got n = {}",
                self.dimension()
            )));
        }
        let terms = self
            .grid
            .map_nodes(|x, frame| self.node_terms(x, frame, s, order))?;
        let sum = |g: fn(&NodeTerms) -> f64| {
            let v: Vec<f64> = terms.iter().map(g).collect();
            self.grid.weighted_sum(&v)
        };
        Ok(Derivatives {
            s,
            f: sum(|t| t.f),
            f1: sum(|t| t.f1),
            f2: (order >= 2).then(|| sum(|t| t.f2)),
            f3: (order >= 3).then(|| sum(|t| t.f3)),
        })
    }

    pub fn f_k(&self, s: f64) -> Result<f64> {
        Ok(self.evaluate(s, 0)?.f)
    }

    pub fn f_k_prime(&self, s: f64) -> Result<f64> {
        Ok(self.evaluate(s, 1)?.f1)
    }

    pub fn f_k_second(&self, s: f64) -> Result<f64> {
        Ok(self.evaluate(s, 2)?.f2.expect("order 2 requested"))
    }

    pub fn f_k_third(&self, s: f64) -> Result<f64> {
        Ok(self.evaluate(s, 3)?.f3.expect("order 3 requested"))
    }
}

/// `f_k(0)`, `f_k′(0)`, `f_k″(0)` at the unit ball in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallClosedForms {
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
}

/// Closed forms at `h ≡ 1`, with the integrals of `ψ`, `ψ²` and `ψΔψ` taken on `grid`.
/// Only `k ≥ 2` (the second derivative carries a factor `k/(k−1)`).
pub fn ball_closed_forms(
    psi: &TestFunction,
    k: usize,
    grid: &SphericalGrid,
) -> Result<BallClosedForms> {
    let n = grid.dimension();
    if k < 2 || k > n {
        return Err(Error::domain(format!(
            "closed forms need 2 ≤ k ≤ n, got k = {k}"
        )));
    }
    let (ni, ki) = (n as i64, k as i64);
    let int_psi = grid.integrate(|x| psi.value(x))?;
    let int_psi2 = grid.integrate(|x| psi.value(x).powi(2))?;
    let int_psi_lap = grid.integrate(|x| {
        let j = psi.jet(x);
        j.value * j.laplacian(x)
    })?;
    let area = grid.total_weight();
    Ok(BallClosedForms {
        f0: area / k as f64 * binom(ni - 1, ni - ki),
        f1: binom(ni - 1, ki - 1) * int_psi,
        f2: binom(ni - 2, ni - ki)
            * ((n as f64 - 1.0) * k as f64 / (k as f64 - 1.0) * int_psi2 + int_psi_lap),
    })
}
