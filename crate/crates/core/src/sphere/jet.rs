use nalgebra::{DMatrix, DVector};

use super::TangentFrame;

/// Value, gradient and Hessian of a smooth function on `ℝ^n` at one point.
///
/// Any smooth ambient extension `g` of a function `φ` on the sphere determines
/// its spherical derivatives at `x ∈ S^{n-1}`:
/// the spherical gradient is the tangential part of `∇g`, and in an
/// orthonormal tangent frame `E`
///
/// ```text
/// φ_ij = Eᵀ ∇²g E − (x·∇g) I,      Q[φ] = Eᵀ ∇²g E + (g − x·∇g) I.
/// ```
///
/// For the 1-homogeneous extension `x·∇g = g` and `Q[φ] = Eᵀ∇²g E`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

impl Jet {
    pub fn constant(n: usize, c: f64) -> Self {
        Jet {
            value: c,
            grad: DVector::zeros(n),
            hess: DMatrix::zeros(n, n),
        }
    }

    pub fn dimension(&self) -> usize {
        self.grad.len()
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet {
            value: c * self.value,
            grad: &self.grad * c,
            hess: &self.hess * c,
        }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        Jet {
            value: self.value + other.value,
            grad: &self.grad + &other.grad,
            hess: &self.hess + &other.hess,
        }
    }

    pub fn add_constant(&self, c: f64) -> Jet {
        Jet {
            value: self.value + c,
            grad: self.grad.clone(),
            hess: self.hess.clone(),
        }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let cross = &self.grad * other.grad.transpose();
        Jet {
            value: self.value * other.value,
            grad: &self.grad * other.value + &other.grad * self.value,
            hess: &self.hess * other.value + &other.hess * self.value + &cross + cross.transpose(),
        }
    }

    pub fn powi(&self, k: u32) -> Jet {
        let mut acc = Jet::constant(self.dimension(), 1.0);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `exp ∘ self`.
    pub fn exp(&self) -> Jet {
        let e = self.value.exp();
        Jet {
            value: e,
            grad: &self.grad * e,
            hess: (&self.hess + &self.grad * self.grad.transpose()) * e,
        }
    }

    fn radial_derivative(&self, x: &[f64]) -> f64 {
        self.grad.iter().zip(x).map(|(g, xi)| g * xi).sum()
    }

    fn frame_matrix(frame: &TangentFrame) -> DMatrix<f64> {
        let n = frame.dimension();
        DMatrix::from_fn(n, frame.vectors.len(), |i, j| frame.vectors[j][i])
    }

    /// Components of the spherical gradient in `frame`.
    pub fn tangent_gradient(&self, frame: &TangentFrame) -> Vec<f64> {
        frame
            .vectors
            .iter()
            .map(|e| e.iter().zip(self.grad.iter()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `|∇_S φ|²` at the base point `x`; frame independent.
    pub fn tangent_gradient_norm_sq(&self, x: &[f64]) -> f64 {
        let r = self.radial_derivative(x);
        self.grad.norm_squared() - r * r
    }

    /// Covariant Hessian `(φ_ij)` in `frame`.
    pub fn spherical_hessian(&self, frame: &TangentFrame) -> DMatrix<f64> {
        let e = Self::frame_matrix(frame);
        let m = e.ncols();
        let mut h = e.transpose() * &self.hess * &e;
        let r = self.radial_derivative(&frame.base);
        for i in 0..m {
            h[(i, i)] -= r;
        }
        h
    }

    /// `Q[φ] = (φ_ij + φ δ_ij)` in `frame`.
    pub fn q_matrix(&self, frame: &TangentFrame) -> DMatrix<f64> {
        let mut q = self.spherical_hessian(frame);
        for i in 0..q.nrows() {
            q[(i, i)] += self.value;
        }
        q
    }

    /// Spherical Laplacian at `x`; frame independent.
    pub fn laplacian(&self, x: &[f64]) -> f64 {
        let n = x.len();
        let xv = DVector::from_column_slice(x);
        let radial_hess = (xv.transpose() * &self.hess * &xv)[(0, 0)];
        self.hess.trace() - radial_hess - (n as f64 - 1.0) * self.radial_derivative(x)
    }
}

/// A smooth function on `ℝ^n` whose restriction to the sphere is the field of interest.
pub trait SmoothField: Send + Sync {
    fn dimension(&self) -> usize;
    fn jet(&self, x: &[f64]) -> Jet;

    fn value(&self, x: &[f64]) -> f64 {
        self.jet(x).value
    }
}
