use nalgebra::DMatrix;

use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::intrinsic::{cofactor_general, elem_sym_all, q_matrix, SymMatrix};
use crate::sphere::SphericalGrid;

/// A functional `F(h) = (1/(d+1)) ∫ h ℱ(h)` whose density `ℱ` depends only on
/// `Q[h]`, is homogeneous of degree `d`, and has a self-adjoint linearization.
pub trait CurvatureFunctional: Sync {
    fn name(&self) -> String;

    /// Degree `d` of homogeneity of the density.
    fn density_degree(&self) -> usize;

    /// `ℱ(h)(x)` as a function of `Q[h](x)`.
    fn density(&self, q: &SymMatrix) -> f64;

    /// `L(h)φ = d/dε ℱ(h + εφ)` given `Q[h]` and `Q[φ]`.
    fn linearized_density(&self, q: &SymMatrix, dq: &DMatrix<f64>) -> f64;

    fn evaluate(&self, body: &Body, grid: &SphericalGrid) -> Result<f64> {
        let d = self.density_degree();
        let integral = grid.integrate_with_frames(|x, frame| {
            let q = q_matrix(body, x, frame)?;
            Ok(body.support(x)? * self.density(&q.matrix))
        })?;
        Ok(integral / (d + 1) as f64)
    }
}

/// `F_k(h) = (1/k) ∫ h S_{k−1}(Q[h])`, i.e. `κ_{n−k} V_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntrinsicVolumeFunctional {
    pub k: usize,
}

impl IntrinsicVolumeFunctional {
    pub fn new(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::domain("k must be at least 1"));
        }
        Ok(IntrinsicVolumeFunctional { k })
    }
}

impl CurvatureFunctional for IntrinsicVolumeFunctional {
    fn name(&self) -> String {
        format!("F_{}", self.k)
    }

    fn density_degree(&self) -> usize {
        self.k - 1
    }

    fn density(&self, q: &SymMatrix) -> f64 {
        elem_sym_all(q).get(self.k - 1).copied().unwrap_or(0.0)
    }

    fn linearized_density(&self, q: &SymMatrix, dq: &DMatrix<f64>) -> f64 {
        if self.k == 1 {
            return 0.0;
        }
        match cofactor_general(self.k - 1, q.as_matrix()) {
            Ok(t) => t.component_mul(dq).sum(),
            Err(_) => 0.0,
        }
    }
}
