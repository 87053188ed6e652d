use serde::{Deserialize, Serialize};

use super::symfn::{elem_sym_all, SymMatrix};
use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::sphere::{SphericalGrid, TangentFrame};
use crate::util::{binom, unit_ball_volume};

/// Volume of the unit ball in `ℝ^j`.
pub fn kappa(j: usize) -> f64 {
    unit_ball_volume(j)
}

/// `Q[h](x)` in a tangent frame, with its positivity flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QMatrix {
    pub matrix: SymMatrix,
    /// `false` when the body is not `C^{2,+}` at this point.
    pub positive_definite: bool,
}

/// `Q[h](x)` from the exact second-order jet of the support function.
pub fn q_matrix(body: &Body, x: &[f64], frame: &TangentFrame) -> Result<QMatrix> {
    let jet = body.support_jet(x)?;
    let matrix = SymMatrix::symmetrized(jet.q_matrix(frame));
    let positive_definite = matrix.is_positive_definite();
    Ok(QMatrix {
        matrix,
        positive_definite,
    })
}

/// `Q[h](x) = Eᵀ ∇²H(x) E` with `H(y) = |y| h(y/|y|)`, by central differences
/// (step `1e-4`, one Richardson extrapolation). Works for any body whose
/// support function is smooth near `x`.
pub fn q_matrix_fd(body: &Body, x: &[f64], frame: &TangentFrame) -> Result<QMatrix> {
    let n = x.len();
    let homog = |y: &[f64]| -> Result<f64> {
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let u: Vec<f64> = y.iter().map(|v| v / r).collect();
        Ok(r * body.support(&u)?)
    };
    let second = |a: &[f64], b: &[f64], d: f64| -> Result<f64> {
        let at = |sa: f64, sb: f64| -> Result<f64> {
            let y: Vec<f64> = (0..n).map(|i| x[i] + d * (sa * a[i] + sb * b[i])).collect();
            homog(&y)
        };
        Ok((at(1.0, 1.0)? - at(1.0, -1.0)? - at(-1.0, 1.0)? + at(-1.0, -1.0)?) / (4.0 * d * d))
    };
    let m = frame.vectors.len();
    let step = 1e-4;
    let mut q = nalgebra::DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let (ei, ej) = (&frame.vectors[i], &frame.vectors[j]);
            let coarse = second(ei, ej, step)?;
            let fine = second(ei, ej, step / 2.0)?;
            let v = (4.0 * fine - coarse) / 3.0;
            q[(i, j)] = v;
            q[(j, i)] = v;
        }
    }
    let matrix = SymMatrix::symmetrized(q);
    let positive_definite = matrix.is_positive_definite();
    Ok(QMatrix {
        matrix,
        positive_definite,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeMethod {
    Quadrature,
    BoxFormula,
    BallClosedForm,
}

impl VolumeMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            VolumeMethod::Quadrature => "quadrature",
            VolumeMethod::BoxFormula => "box-formula",
            VolumeMethod::BallClosedForm => "ball-closed-form",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicVolumeResult {
    pub value: f64,
    pub k: usize,
    pub method: VolumeMethod,
    /// `|V(grid) − V(coarser grid)|` for quadrature, 0 for closed forms.
    pub error_estimate: f64,
    /// Quadrature nodes where `Q[h]` was not positive definite.
    pub non_positive_nodes: usize,
}

fn check_order(n: usize, k: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::domain(format!(
            "need 1 ≤ k ≤ n, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

fn check_body_dimension(body: &Body, n: usize) -> Result<()> {
    match body.dimension() {
        Some(d) if d != n => Err(Error::domain(format!(
            "body has dimension {d}, grid has {n}"
        ))),
        _ => Ok(()),
    }
}

/// `(1/(kκ_{n−k})) ∫ h S_{k−1}(Q[h])` and the count of non-positive nodes.
fn quadrature_value(body: &Body, k: usize, grid: &SphericalGrid) -> Result<(f64, usize)> {
    let n = grid.dimension();
    let per_node = grid.map_nodes(|x, frame| {
        let h = body.support(x)?;
        if k == 1 {
            return Ok((h, true));
        }
        let q = q_matrix(body, x, frame)?;
        let s = elem_sym_all(&q.matrix)[k - 1];
        Ok((h * s, q.positive_definite))
    })?;
    let values: Vec<f64> = per_node.iter().map(|v| v.0).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Evaluation {
            node: grid.nodes()[i].clone(),
            value: values[i],
        });
    }
    let bad = per_node.iter().filter(|v| !v.1).count();
    let integral = grid.weighted_sum(&values);
    Ok((integral / (k as f64 * kappa(n - k)), bad))
}

/// `V_k` of a smooth body by spherical quadrature.
pub fn vk_quadrature(body: &Body, k: usize, grid: &SphericalGrid) -> Result<IntrinsicVolumeResult> {
    let n = grid.dimension();
    check_order(n, k)?;
    check_body_dimension(body, n)?;
    if !body.is_smooth() {
        return Err(Error::Unsupported(format!(
            "quadrature needs a smooth support function, got {}",
            body.kind()
        )));
    }
    let (value, non_positive_nodes) = quadrature_value(body, k, grid)?;
    let error_estimate = match grid.coarsened() {
        Some(c) => (value - quadrature_value(body, k, &c)?.0).abs(),
        None => 0.0,
    };
    Ok(IntrinsicVolumeResult {
        value,
        k,
        method: VolumeMethod::Quadrature,
        error_estimate,
        non_positive_nodes,
    })
}

/// `V_k(∏[−a_i, a_i]) = 2^k e_k(a)`.
pub fn vk_box(a: &[f64], k: usize) -> Result<IntrinsicVolumeResult> {
    check_order(a.len(), k)?;
    if a.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::domain(
            "box half-lengths must be finite and non-negative",
        ));
    }
    // e[j] = elementary symmetric polynomial of degree j of the a_i seen so far.
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &ai in a {
        for j in (1..=k).rev() {
            e[j] += ai * e[j - 1];
        }
    }
    Ok(IntrinsicVolumeResult {
        value: 2f64.powi(k as i32) * e[k],
        k,
        method: VolumeMethod::BoxFormula,
        error_estimate: 0.0,
        non_positive_nodes: 0,
    })
}

/// `V_k(R B_n) = C(n,k) κ_n R^k / κ_{n−k}`.
pub fn vk_ball(n: usize, k: usize, radius: f64) -> Result<IntrinsicVolumeResult> {
    check_order(n, k)?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::domain("ball radius must be positive"));
    }
    Ok(IntrinsicVolumeResult {
        value: binom(n as i64, k as i64) * kappa(n) * radius.powi(k as i32) / kappa(n - k),
        k,
        method: VolumeMethod::BallClosedForm,
        error_estimate: 0.0,
        non_positive_nodes: 0,
    })
}

/// `V_k` in ambient dimension `n` by the applicable path: closed forms for balls,
/// boxes and embedded cubes, quadrature (on `grid`) for other smooth bodies.
pub fn intrinsic_volume(
    body: &Body,
    n: usize,
    k: usize,
    grid: Option<&SphericalGrid>,
) -> Result<IntrinsicVolumeResult> {
    check_body_dimension(body, n)?;
    match body {
        Body::Ball { radius } => vk_ball(n, k, *radius),
        Body::Box { a } => vk_box(a, k),
        Body::EmbeddedCube { .. } => match body.dilate(1.0)? {
            Body::Box { a } => vk_box(&a, k),
            _ => unreachable!("cubes dilate to boxes"),
        },
        Body::LogPerturbedBall { .. } => {
            let grid = grid.ok_or_else(|| Error::config("quadrature needs a grid"))?;
            vk_quadrature(body, k, grid)
        }
        Body::WulffSampled { .. } => Err(Error::Unsupported(
            "intrinsic volumes of sampled Wulff shapes".into(),
        )),
    }
}

/// `S_{k−1}(Q[h](x))`, the density of the order-`(k−1)` area measure.
pub fn area_measure_density(body: &Body, k: usize, x: &[f64], frame: &TangentFrame) -> Result<f64> {
    let n = x.len();
    if k < 2 || k > n {
        return Err(Error::domain(format!(
            "need 2 ≤ k ≤ n, got k = {k}, n = {n}"
        )));
    }
    let q = q_matrix(body, x, frame)?;
    Ok(elem_sym_all(&q.matrix)[k - 1])
}
