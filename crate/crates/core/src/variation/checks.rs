use serde::{Deserialize, Serialize};

use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::intrinsic::{cofactor_general, elem_sym_all, q_matrix, second_cofactor_general};
use crate::sphere::{SmoothField, SphericalGrid, TangentFrame, TestFunction};
use crate::util::binom;

use super::path::VariationPath;

/// `ψ̄ = ψ − m_ψ` with `m_ψ` the mean of `ψ` over the grid.
pub fn center_test_function(
    psi: &TestFunction,
    grid: &SphericalGrid,
) -> Result<(TestFunction, f64)> {
    let mean = grid.integrate(|x| psi.value(x))? / grid.total_weight();
    Ok((psi.shifted(-mean), mean))
}

/// Relative defect of `f̄_k(s) = e^{−k s m_ψ} f_k(s)`, where `f̄_k` uses the centered `ψ̄`.
pub fn centering_identity_defect(path: &VariationPath, s: f64) -> Result<f64> {
    let (centered, mean) = center_test_function(&path.psi, &path.grid)?;
    let bar = VariationPath::new(path.base.clone(), centered, path.k, path.grid.clone())?;
    let lhs = bar.f_k(s)?;
    let rhs = (-(path.k as f64) * s * mean).exp() * path.f_k(s)?;
    Ok((lhs - rhs).abs() / rhs.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoincareRatio {
    Value(f64),
    /// `ψ ≡ 0`: both sides vanish.
    ExactEquality,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareReport {
    /// `∫ψ²`.
    pub lhs: f64,
    /// `(1/2n) ∫|∇ψ|²`.
    pub rhs: f64,
    pub ratio: PoincareRatio,
}

/// Compares `∫ψ²` with `(1/2n)∫|∇ψ|²` for an even, zero-mean `ψ`.
pub fn poincare_check(psi: &TestFunction, grid: &SphericalGrid) -> Result<PoincareReport> {
    let n = grid.dimension();
    if psi.dimension() != n {
        return Err(Error::domain("ψ and grid dimensions differ"));
    }
    if !psi.polynomial.is_even() {
        return Err(Error::Precondition("ψ must be even".into()));
    }
    let mean = grid.integrate(|x| psi.value(x))?;
    if mean.abs() > 1e-8 {
        return Err(Error::Precondition(format!(
            "ψ must have zero mean (∫ψ = {mean:e}); center it first"
        )));
    }
    let lhs = grid.integrate(|x| psi.value(x).powi(2))?;
    let grad = grid.integrate(|x| psi.jet(x).tangent_gradient_norm_sq(x))?;
    let rhs = grad / (2.0 * n as f64);
    let ratio = if lhs == 0.0 && rhs == 0.0 {
        PoincareRatio::ExactEquality
    } else {
        PoincareRatio::Value(lhs / rhs)
    };
    Ok(PoincareReport { lhs, rhs, ratio })
}

/// Absolute defects of the two integration-by-parts identities for `S_k(Q[h])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IbpResiduals {
    /// `|∫φ̄ S_k^{ij} Q[φ]_ij − ∫φ S_k^{ij} Q[φ̄]_ij|`.
    pub residual1: f64,
    /// `|∫ψ S_k^{ij,rs} Q[φ]_ij Q[φ̄]_rs − ∫φ̄ S_k^{ij,rs} Q[φ]_ij Q[ψ]_rs|`.
    pub residual2: f64,
    /// Magnitude of the first left-hand side, for scale.
    pub magnitude1: f64,
    pub magnitude2: f64,
}

pub fn ibp_check(
    h: &Body,
    phi: &TestFunction,
    phi_bar: &TestFunction,
    psi: &TestFunction,
    k: usize,
    grid: &SphericalGrid,
) -> Result<IbpResiduals> {
    let n = grid.dimension();
    if k < 1 || k > n - 1 {
        return Err(Error::domain(format!("need 1 ≤ k ≤ n − 1, got k = {k}")));
    }
    if [phi, phi_bar, psi].iter().any(|f| f.dimension() != n) {
        return Err(Error::domain("test function and grid dimensions differ"));
    }
    let terms = grid.map_nodes(|x, frame: &TangentFrame| {
        let q = q_matrix(h, x, frame)?.matrix;
        let (jp, jb, js) = (phi.jet(x), phi_bar.jet(x), psi.jet(x));
        let (qp, qb, qs) = (jp.q_matrix(frame), jb.q_matrix(frame), js.q_matrix(frame));
        let cof = cofactor_general(k, q.as_matrix())?;
        let second = second_cofactor_general(k, q.as_matrix())?;
        Ok([
            jb.value * cof.component_mul(&qp).sum(),
            jp.value * cof.component_mul(&qb).sum(),
            js.value * second.contract(&qp, &qb),
            jb.value * second.contract(&qp, &qs),
        ])
    })?;
    let integral = |c: usize| {
        let v: Vec<f64> = terms.iter().map(|t| t[c]).collect();
        grid.weighted_sum(&v)
    };
    let (a, b, c, d) = (integral(0), integral(1), integral(2), integral(3));
    Ok(IbpResiduals {
        residual1: (a - b).abs(),
        residual2: (c - d).abs(),
        magnitude1: a.abs(),
        magnitude2: c.abs(),
    })
}

fn check_christoffel_args(p: f64, k: usize, n: usize) -> Result<()> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain(format!("p = {p} outside [0, 1)")));
    }
    if k < 2 || k > n {
        return Err(Error::domain(format!("need 2 ≤ k ≤ n, got k = {k}")));
    }
    Ok(())
}

/// `h^{1−p} S_{k−1}(Q[h]) − C(n−1, k−1)` at `x`.
pub fn christoffel_residual(
    body: &Body,
    p: f64,
    k: usize,
    x: &[f64],
    frame: &TangentFrame,
) -> Result<f64> {
    let n = x.len();
    check_christoffel_args(p, k, n)?;
    let h = body.support(x)?;
    if h <= 0.0 {
        return Err(Error::domain(format!("support value {h} ≤ 0 at {x:?}")));
    }
    let q = q_matrix(body, x, frame)?;
    let s = elem_sym_all(&q.matrix)[k - 1];
    Ok(h.powf(1.0 - p) * s - binom(n as i64 - 1, k as i64 - 1))
}

/// `max_j |residual(node_j)|` over the grid.
pub fn christoffel_max_residual(
    body: &Body,
    p: f64,
    k: usize,
    grid: &SphericalGrid,
) -> Result<f64> {
    check_christoffel_args(p, k, grid.dimension())?;
    let r = grid.map_nodes(|x, frame| christoffel_residual(body, p, k, x, frame))?;
    Ok(r.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::GridMethod;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize, res: usize) -> SphericalGrid {
        SphericalGrid::build(n, res, GridMethod::ProductAngular, 0).unwrap()
    }

    #[test]
    fn centering() {
        let g = grid(4, 6);
        let (bar, m) = center_test_function(&TestFunction::constant(4, 0.7), &g).unwrap();
        assert!((m - 0.7).abs() < 1e-12);
        assert!(g.integrate(|x| bar.value(x)).unwrap().abs() < 1e-10);

        let mut powers = vec![0; 4];
        powers[0] = 2;
        let sq = TestFunction::new(
            crate::sphere::Polynomial::new(4, vec![crate::sphere::Monomial { coeff: 1.0, powers }])
                .unwrap(),
            1.0,
        )
        .unwrap();
        let (bar, m) = center_test_function(&sq, &g).unwrap();
        assert!((m - 0.25).abs() < 1e-12);
        let x = [0.5, 0.5, 0.5, 0.5];
        assert!((bar.value(&x) - (0.25 - 0.25)).abs() < 1e-12);
    }

    #[test]
    fn centering_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = TestFunction::random_quadratic(3, 0.1, &mut rng);
        let path = VariationPath::unit_ball(psi, 2, grid(3, 8)).unwrap();
        for s in [-1.0, 1.0] {
            assert!(centering_identity_defect(&path, s).unwrap() < 1e-6);
        }
    }

    #[test]
    fn poincare_examples() {
        for n in [3, 4, 5] {
            let g = grid(n, 6);
            let r = poincare_check(&TestFunction::centered_coordinate_square(n, 0).unwrap(), &g)
                .unwrap();
            match r.ratio {
                PoincareRatio::Value(v) => assert!((v - 1.0).abs() < 1e-10, "{v}"),
                _ => panic!(),
            }
            let q = poincare_check(&TestFunction::harmonic_quartic(n).unwrap(), &g).unwrap();
            match q.ratio {
                PoincareRatio::Value(v) => {
                    assert!((v - 2.0 * n as f64 / (4.0 * (n as f64 + 2.0))).abs() < 1e-10)
                }
                _ => panic!(),
            }
        }
        let z = poincare_check(&TestFunction::constant(3, 0.0), &grid(3, 4)).unwrap();
        assert_eq!(z.ratio, PoincareRatio::ExactEquality);
        assert!(matches!(
            poincare_check(&TestFunction::constant(3, 1.0), &grid(3, 4)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ibp_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = grid(4, 8);
        let ball = Body::Ball { radius: 1.0 };
        for k in 1..=3 {
            let phi = TestFunction::random_quadratic(4, 1.0, &mut rng);
            let bar = TestFunction::random_quadratic(4, 1.0, &mut rng);
            let psi = TestFunction::random_quadratic(4, 1.0, &mut rng);
            let same = ibp_check(&ball, &phi, &phi, &psi, k, &g).unwrap();
            assert_eq!(same.residual1, 0.0);
            let r = ibp_check(&ball, &phi, &bar, &psi, k, &g).unwrap();
            assert!(r.residual1 < 1e-10 && r.residual2 < 1e-10, "{r:?}");
            let pert =
                Body::log_perturbed_ball(TestFunction::random_quadratic(4, 0.1, &mut rng), 1.0)
                    .unwrap();
            let r = ibp_check(&pert, &phi, &bar, &psi, k, &g).unwrap();
            assert!(r.residual1 < 1e-5 && r.residual2 < 1e-5, "{r:?}");
        }
        let c = ibp_check(
            &ball,
            &TestFunction::random_quadratic(4, 1.0, &mut rng),
            &TestFunction::random_quadratic(4, 1.0, &mut rng),
            &TestFunction::constant(4, 2.0),
            1,
            &g,
        )
        .unwrap();
        assert!(c.residual2 < 1e-10);
    }

    #[test]
    fn christoffel() {
        let x = [0.0, 0.6, 0.0, 0.8];
        let f = crate::sphere::tangent_frame(&x).unwrap();
        let ball = Body::Ball { radius: 1.0 };
        for k in 2..=4 {
            assert!(christoffel_residual(&ball, 0.3, k, &x, &f).unwrap().abs() < 1e-12);
        }
        let r = christoffel_residual(&Body::Ball { radius: 1.1 }, 0.5, 2, &x, &f).unwrap();
        assert!((r - (1.1f64.powf(1.5) - 1.0) * 3.0).abs() < 1e-12);
        let pert = Body::log_perturbed_ball(
            TestFunction::centered_coordinate_square(4, 0).unwrap(),
            0.01,
        )
        .unwrap();
        assert!(christoffel_max_residual(&pert, 0.0, 2, &grid(4, 4)).unwrap() > 1e-4);
        assert!(christoffel_residual(&ball, 1.0, 2, &x, &f).is_err());
    }
}
