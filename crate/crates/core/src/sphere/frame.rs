use crate::error::{Error, Result};
use crate::util::{dot, norm};

/// Orthonormal basis `e_1..e_{n-1}` of the tangent space `T_x S^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFrame {
    pub base: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl TangentFrame {
    pub fn dimension(&self) -> usize {
        self.base.len()
    }

    /// Largest deviation from `(e_i, e_j) = δ_ij` and `(e_i, x) = 0`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, ei) in self.vectors.iter().enumerate() {
            worst = worst.max(dot(ei, &self.base).abs());
            for (j, ej) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(ei, ej) - target).abs());
            }
        }
        worst
    }

    /// Frame rotated by an orthogonal `(n-1)×(n-1)` matrix given row-major.
    /// Used to check that frame choice does not change invariants.
    pub fn rotated(&self, rotation: &[f64]) -> TangentFrame {
        let m = self.vectors.len();
        assert_eq!(rotation.len(), m * m);
        let n = self.base.len();
        let vectors = (0..m)
            .map(|i| {
                let mut v = vec![0.0; n];
                for j in 0..m {
                    let r = rotation[i * m + j];
                    for (vk, ek) in v.iter_mut().zip(&self.vectors[j]) {
                        *vk += r * ek;
                    }
                }
                v
            })
            .collect();
        TangentFrame {
            base: self.base.clone(),
            vectors,
        }
    }
}

/// Builds a tangent frame at the unit vector `x` by Gram–Schmidt on the
/// coordinate axes, taken in order of increasing `|x_i|` (ties by index).
/// At `x = e_n` this yields exactly `e_1..e_{n-1}`.
pub fn tangent_frame(x: &[f64]) -> Result<TangentFrame> {
    let n = x.len();
    if n < 2 {
        return Err(Error::domain("tangent frames need n >= 2"));
    }
    let r = norm(x);
    if !r.is_finite() || (r - 1.0).abs() > 1e-10 {
        return Err(Error::domain(format!(
            "base point has norm {r}, expected 1"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()).then(a.cmp(&b)));

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for &axis in &order {
        if basis.len() == n - 1 {
            break;
        }
        let mut v = vec![0.0; n];
        v[axis] = 1.0;
        // Two passes of classical Gram–Schmidt.
        for _ in 0..2 {
            let c = dot(&v, x);
            for (vi, xi) in v.iter_mut().zip(x) {
                *vi -= c * xi;
            }
            for b in &basis {
                let c = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let len = norm(&v);
        if len < 1e-6 {
            continue;
        }
        v.iter_mut().for_each(|vi| *vi /= len);
        basis.push(v);
    }
    debug_assert_eq!(basis.len(), n - 1);
    Ok(TangentFrame {
        base: x.to_vec(),
        vectors: basis,
    })
}
