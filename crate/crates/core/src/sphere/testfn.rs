use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Jet, SmoothField};
use crate::error::{Error, Result};

/// `coeff · Π x_i^{powers[i]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: f64,
    pub powers: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.powers.iter().sum()
    }
}

/// A polynomial on `ℝ^n`, used as an ambient extension of a function on the sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub dimension: usize,
    pub monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(dimension: usize, monomials: Vec<Monomial>) -> Result<Self> {
        if let Some(m) = monomials.iter().find(|m| m.powers.len() != dimension) {
            return Err(Error::domain(format!(
                "monomial has {} exponents, expected {dimension}",
                m.powers.len()
            )));
        }
        Ok(Polynomial {
            dimension,
            monomials,
        })
    }

    pub fn constant(dimension: usize, c: f64) -> Self {
        Polynomial {
            dimension,
            monomials: vec![Monomial {
                coeff: c,
                powers: vec![0; dimension],
            }],
        }
    }

    /// `xᵀ A x + c` for a symmetric `A` given row-major.
    pub fn quadratic(dimension: usize, a: &[f64], c: f64) -> Result<Self> {
        if a.len() != dimension * dimension {
            return Err(Error::domain("quadratic form has wrong size"));
        }
        let mut monomials = Vec::new();
        for i in 0..dimension {
            for j in i..dimension {
                let coeff = if i == j {
                    a[i * dimension + i]
                } else {
                    a[i * dimension + j] + a[j * dimension + i]
                };
                if coeff != 0.0 {
                    let mut powers = vec![0; dimension];
                    powers[i] += 1;
                    powers[j] += 1;
                    monomials.push(Monomial { coeff, powers });
                }
            }
        }
        if c != 0.0 {
            monomials.push(Monomial {
                coeff: c,
                powers: vec![0; dimension],
            });
        }
        Polynomial::new(dimension, monomials)
    }

    pub fn is_even(&self) -> bool {
        self.monomials
            .iter()
            .all(|m| m.coeff == 0.0 || m.degree() % 2 == 0)
    }

    pub fn with_constant(&self, c: f64) -> Polynomial {
        let mut out = self.clone();
        out.monomials.push(Monomial {
            coeff: c,
            powers: vec![0; self.dimension],
        });
        out
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.monomials
            .iter()
            .map(|m| {
                m.coeff
                    * m.powers
                        .iter()
                        .zip(x)
                        .map(|(&p, &xi)| xi.powi(p as i32))
                        .product::<f64>()
            })
            .sum()
    }
}

/// `x^p` and its first two derivatives, exact at `x = 0`.
fn power_jet(x: f64, p: u32) -> [f64; 3] {
    let pf = p as f64;
    match p {
        0 => [1.0, 0.0, 0.0],
        1 => [x, 1.0, 0.0],
        _ => [
            x.powi(p as i32),
            pf * x.powi(p as i32 - 1),
            pf * (pf - 1.0) * x.powi(p as i32 - 2),
        ],
    }
}

impl SmoothField for Polynomial {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn jet(&self, x: &[f64]) -> Jet {
        let n = self.dimension;
        let mut value = 0.0;
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        let mut factors = vec![[0.0; 3]; n];
        for m in &self.monomials {
            for (i, f) in factors.iter_mut().enumerate() {
                *f = power_jet(x[i], m.powers[i]);
            }
            // Product of the value factors excluding up to two indices.
            let prod_except = |a: usize, b: usize| -> f64 {
                factors
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != a && *i != b)
                    .map(|(_, f)| f[0])
                    .product()
            };
            value += m.coeff * prod_except(n, n);
            for a in 0..n {
                if m.powers[a] == 0 {
                    continue;
                }
                grad[a] += m.coeff * factors[a][1] * prod_except(a, n);
                hess[(a, a)] += m.coeff * factors[a][2] * prod_except(a, n);
                for b in (a + 1)..n {
                    if m.powers[b] == 0 {
                        continue;
                    }
                    let v = m.coeff * factors[a][1] * factors[b][1] * prod_except(a, b);
                    hess[(a, b)] += v;
                    hess[(b, a)] += v;
                }
            }
        }
        Jet { value, grad, hess }
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.evaluate(x)
    }
}

/// Even polynomial perturbation `ψ = amplitude · P(x)` restricted to the sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub polynomial: Polynomial,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

impl TestFunction {
    /// Wraps an even polynomial; odd monomials are rejected.
    pub fn new(polynomial: Polynomial, amplitude: f64) -> Result<Self> {
        if !polynomial.is_even() {
            return Err(Error::Precondition(
                "test functions must be even polynomials".into(),
            ));
        }
        if !amplitude.is_finite() {
            return Err(Error::domain("amplitude must be finite"));
        }
        Ok(TestFunction {
            polynomial,
            amplitude,
        })
    }

    pub fn constant(n: usize, c: f64) -> Self {
        TestFunction {
            polynomial: Polynomial::constant(n, c),
            amplitude: 1.0,
        }
    }

    /// `x_axis² − 1/n`, a degree-2 spherical harmonic (zero mean on the sphere).
    pub fn centered_coordinate_square(n: usize, axis: usize) -> Result<Self> {
        if axis >= n {
            return Err(Error::domain(format!(
                "axis {axis} out of range for n = {n}"
            )));
        }
        let mut powers = vec![0; n];
        powers[axis] = 2;
        let poly = Polynomial::new(
            n,
            vec![
                Monomial { coeff: 1.0, powers },
                Monomial {
                    coeff: -1.0 / n as f64,
                    powers: vec![0; n],
                },
            ],
        )?;
        TestFunction::new(poly, 1.0)
    }

    /// `x_1⁴ − 6x_1²x_2² + x_2⁴`: harmonic and homogeneous of degree 4,
    /// hence a spherical harmonic with eigenvalue `4(n+2)`.
    pub fn harmonic_quartic(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("quartic harmonic needs n >= 2"));
        }
        let pw = |a: u32, b: u32| {
            let mut p = vec![0; n];
            p[0] = a;
            p[1] = b;
            p
        };
        let poly = Polynomial::new(
            n,
            vec![
                Monomial {
                    coeff: 1.0,
                    powers: pw(4, 0),
                },
                Monomial {
                    coeff: -6.0,
                    powers: pw(2, 2),
                },
                Monomial {
                    coeff: 1.0,
                    powers: pw(0, 4),
                },
            ],
        )?;
        TestFunction::new(poly, 1.0)
    }

    /// `xᵀ A x + c` with entries of `A` and `c` drawn uniformly from `[-1, 1]`.
    pub fn random_quadratic<R: Rng + ?Sized>(n: usize, amplitude: f64, rng: &mut R) -> Self {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v: f64 = rng.random_range(-1.0..=1.0);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let c: f64 = rng.random_range(-1.0..=1.0);
        let poly = Polynomial::quadratic(n, &a, c).expect("sizes match");
        TestFunction {
            polynomial: poly,
            amplitude,
        }
    }

    pub fn dimension(&self) -> usize {
        self.polynomial.dimension
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Self {
        TestFunction {
            polynomial: self.polynomial.clone(),
            amplitude,
        }
    }

    /// `ψ + c` (with `c` in the scaled units of `ψ`).
    pub fn shifted(&self, c: f64) -> Self {
        if self.amplitude == 0.0 {
            return TestFunction {
                polynomial: Polynomial::constant(self.dimension(), c),
                amplitude: 1.0,
            };
        }
        TestFunction {
            polynomial: self.polynomial.with_constant(c / self.amplitude),
            amplitude: self.amplitude,
        }
    }

    /// Whether the polynomial has no non-constant monomials.
    pub fn is_constant(&self) -> bool {
        self.amplitude == 0.0
            || self
                .polynomial
                .monomials
                .iter()
                .all(|m| m.coeff == 0.0 || m.degree() == 0)
    }
}

impl SmoothField for TestFunction {
    fn dimension(&self) -> usize {
        self.polynomial.dimension
    }

    fn jet(&self, x: &[f64]) -> Jet {
        self.polynomial.jet(x).scale(self.amplitude)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.amplitude * self.polynomial.evaluate(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fd_check(f: &dyn SmoothField, x: &[f64]) {
        let n = x.len();
        let j = f.jet(x);
        let h = 1e-5;
        for a in 0..n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[a] += h;
            xm[a] -= h;
            let g = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
            assert!(
                (g - j.grad[a]).abs() < 1e-8,
                "grad {a}: {g} vs {}",
                j.grad[a]
            );
            let jp = f.jet(&xp);
            let jm = f.jet(&xm);
            for b in 0..n {
                let hb = (jp.grad[b] - jm.grad[b]) / (2.0 * h);
                assert!((hb - j.hess[(a, b)]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn jets_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = TestFunction::random_quadratic(4, 0.7, &mut rng);
        fd_check(&q, &[0.1, -0.5, 0.3, 0.8]);
        let h4 = TestFunction::harmonic_quartic(3).unwrap();
        fd_check(&h4, &[0.0, 0.6, 0.8]);
        fd_check(&h4, &[0.48, 0.6, 0.64]);
    }

    #[test]
    fn evenness_is_enforced() {
        let odd = Polynomial::new(
            2,
            vec![Monomial {
                coeff: 1.0,
                powers: vec![1, 0],
            }],
        )
        .unwrap();
        assert!(TestFunction::new(odd, 1.0).is_err());
        let q = TestFunction::centered_coordinate_square(3, 0).unwrap();
        let x = [0.3, -0.4, 0.5];
        let y = [-0.3, 0.4, -0.5];
        assert_eq!(q.value(&x), q.value(&y));
    }

    #[test]
    fn quartic_is_harmonic_in_the_ambient_space() {
        let h4 = TestFunction::harmonic_quartic(5).unwrap();
        let j = h4.jet(&[0.3, -0.2, 0.5, 0.1, 0.7]);
        assert!(j.hess.trace().abs() < 1e-13);
    }

    #[test]
    fn shifted_adds_in_scaled_units() {
        let q = TestFunction::centered_coordinate_square(3, 1)
            .unwrap()
            .with_amplitude(0.5);
        let s = q.shifted(0.25);
        let x = [0.0, 1.0, 0.0];
        assert!((s.value(&x) - (q.value(&x) + 0.25)).abs() < 1e-15);
    }
}
