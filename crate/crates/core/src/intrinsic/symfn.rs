//! Elementary symmetric functions `S_r` of the eigenvalues of a matrix and
//! their first and second derivatives with respect to the matrix entries.
//!
//! Derivatives treat the `N²` entries as independent variables, so
//! `S_r^{ij} = ∂S_r/∂a_ij` is the Newton tensor
//! `T_{r-1}(A) = Σ_{m<r} (−1)^m S_{r-1-m}(A) A^m` (transposed for general `A`).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real symmetric matrix of order `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SymMatrix(DMatrix<f64>);

const SYMMETRY_TOL: f64 = 1e-10;

impl SymMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::domain("matrix is not square"));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL * (1.0 + m[(i, j)].abs()) {
                    return Err(Error::domain(format!(
                        "matrix not symmetric at ({i}, {j}): {} vs {}",
                        m[(i, j)],
                        m[(j, i)]
                    )));
                }
            }
        }
        Ok(SymMatrix(m))
    }

    /// Symmetrizes `(m + mᵀ)/2` without checking.
    pub fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        SymMatrix((m + t) * 0.5)
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(DMatrix::identity(n, n))
    }

    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::domain("wrong number of entries"));
        }
        Self::new(DMatrix::from_row_slice(n, n, data))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn scaled(&self, c: f64) -> Self {
        SymMatrix(&self.0 * c)
    }

    /// Positive definiteness via Cholesky.
    pub fn is_positive_definite(&self) -> bool {
        self.0.clone().cholesky().is_some()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `Σ_ij A_ij B_ij`.
    pub fn frobenius_dot(&self, other: &DMatrix<f64>) -> f64 {
        self.0.component_mul(other).sum()
    }
}

impl TryFrom<Vec<Vec<f64>>> for SymMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("ragged matrix rows"));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        SymMatrix::from_row_slice(n, &flat)
    }
}

impl From<SymMatrix> for Vec<Vec<f64>> {
    fn from(m: SymMatrix) -> Self {
        let n = m.order();
        (0..n)
            .map(|i| (0..n).map(|j| m.0[(i, j)]).collect())
            .collect()
    }
}

/// `[S_0, S_1, …, S_N]` of an arbitrary square matrix by the
/// Faddeev–LeVerrier recursion (sums of principal minors).
pub fn elem_sym_all_general(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut s = vec![0.0; n + 1];
    s[0] = 1.0;
    // Characteristic polynomial coefficients c_{N-k} = (−1)^k S_k.
    let mut m = DMatrix::<f64>::identity(n, n);
    for (k, sk) in s.iter_mut().enumerate().skip(1) {
        let am = a * &m;
        let c = -am.trace() / k as f64;
        *sk = if k % 2 == 0 { c } else { -c };
        if k < n {
            m = am;
            for i in 0..n {
                m[(i, i)] += c;
            }
        }
    }
    s
}

pub fn elem_sym_all(a: &SymMatrix) -> Vec<f64> {
    elem_sym_all_general(a.as_matrix())
}

/// `S_r(A)`, `0 ≤ r ≤ N`.
pub fn elem_sym(r: usize, a: &SymMatrix) -> Result<f64> {
    let n = a.order();
    if r > n {
        return Err(Error::domain(format!(
            "S_r needs r <= N = {n}, got r = {r}"
        )));
    }
    Ok(elem_sym_all(a)[r])
}

fn powers(a: &DMatrix<f64>, up_to: usize) -> Vec<DMatrix<f64>> {
    let n = a.nrows();
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(DMatrix::identity(n, n));
    for m in 1..=up_to {
        let next = &out[m - 1] * a;
        out.push(next);
    }
    out
}

/// Newton tensor `T_q(A) = Σ_{m=0}^{q} (−1)^m S_{q-m}(A) A^m`.
fn newton_tensor(q: usize, s: &[f64], pw: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n = pw[0].nrows();
    let mut t = DMatrix::zeros(n, n);
    for m in 0..=q {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        t += &pw[m] * (sign * s[q - m]);
    }
    t
}

/// `(∂S_r/∂a_ij)_{ij}` for a general square matrix.
pub fn cofactor_general(r: usize, a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if r < 1 || r > n {
        return Err(Error::domain(format!(
            "cofactor needs 1 <= r <= N = {n}, got {r}"
        )));
    }
    let s = elem_sym_all_general(a);
    let pw = powers(a, r - 1);
    Ok(newton_tensor(r - 1, &s, &pw).transpose())
}

/// The `r`-cofactor matrix `(S_r^{ij}(A))`.
pub fn cofactor(r: usize, a: &SymMatrix) -> Result<SymMatrix> {
    Ok(SymMatrix::symmetrized(cofactor_general(r, a.as_matrix())?))
}

/// `S_r^{ij,kl}(A) = ∂²S_r/∂a_ij ∂a_kl`, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondCofactor {
    order: usize,
    data: Vec<f64>,
}

impl SecondCofactor {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.order;
        self.data[((i * n + j) * n + k) * n + l]
    }

    /// `Σ S^{ij,kl} B_ij C_kl`.
    pub fn contract(&self, b: &DMatrix<f64>, c: &DMatrix<f64>) -> f64 {
        let n = self.order;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let bij = b[(i, j)];
                if bij == 0.0 {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        acc += self.get(i, j, k, l) * bij * c[(k, l)];
                    }
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }
}

/// Second derivatives of `S_r` for a general square matrix, in closed form:
/// differentiate `T_{r-1}` term by term, using `∂S_q/∂a_kl = (T_{q-1})_lk`
/// and `∂(A^m)_ij/∂a_kl = Σ_{a<m} (A^a)_ik (A^{m-1-a})_lj`.
pub fn second_cofactor_general(r: usize, a: &DMatrix<f64>) -> Result<SecondCofactor> {
    let n = a.nrows();
    if r < 1 || r > n {
        return Err(Error::domain(format!(
            "second cofactor needs 1 <= r <= N = {n}, got {r}"
        )));
    }
    let s = elem_sym_all_general(a);
    let pw = powers(a, r.saturating_sub(1));
    let tensors: Vec<DMatrix<f64>> = (0..r.saturating_sub(1))
        .map(|q| newton_tensor(q, &s, &pw))
        .collect();

    // g[i][j][k][l] = ∂(T_{r-1})_ij / ∂a_kl
    let mut g = vec![0.0; n * n * n * n];
    let at = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    for m in 0..r {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let q = r - 1 - m;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut v = 0.0;
                        if q >= 1 {
                            v += tensors[q - 1][(l, k)] * pw[m][(i, j)];
                        }
                        if m >= 1 {
                            let mut d = 0.0;
                            for p in 0..m {
                                d += pw[p][(i, k)] * pw[m - 1 - p][(l, j)];
                            }
                            v += s[q] * d;
                        }
                        g[at(i, j, k, l)] += sign * v;
                    }
                }
            }
        }
    }
    // S^{ij,kl} = ∂/∂a_kl of ∂S_r/∂a_ij = ∂(T_{r-1})_ji / ∂a_kl.
    let mut data = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    data[at(i, j, k, l)] = g[at(j, i, k, l)];
                }
            }
        }
    }
    Ok(SecondCofactor { order: n, data })
}

pub fn second_cofactor(r: usize, a: &SymMatrix) -> Result<SecondCofactor> {
    second_cofactor_general(r, a.as_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::binom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_general(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0))
    }

    fn random_sym(n: usize, rng: &mut ChaCha8Rng) -> SymMatrix {
        SymMatrix::symmetrized(random_general(n, rng))
    }

    /// Oracle: eigen-decompose and enumerate all r-subsets.
    fn elem_sym_by_subsets(r: usize, a: &SymMatrix) -> f64 {
        let lambda: Vec<f64> = a
            .as_matrix()
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        let n = lambda.len();
        (0u32..(1 << n))
            .filter(|mask| mask.count_ones() as usize == r)
            .map(|mask| {
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| lambda[i])
                    .product::<f64>()
            })
            .sum()
    }

    #[test]
    fn identity_values() {
        for n in 1..=8 {
            let id = SymMatrix::identity(n);
            for r in 0..=n {
                assert_eq!(elem_sym(r, &id).unwrap(), binom(n as i64, r as i64));
            }
            for r in 1..=n {
                let c = cofactor(r, &id).unwrap();
                let expected = DMatrix::identity(n, n) * binom(n as i64 - 1, r as i64 - 1);
                assert_eq!(c.as_matrix(), &expected);
            }
        }
    }

    #[test]
    fn matches_eigenvalue_subsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_sym(4, &mut rng);
            for r in 0..=4 {
                let got = elem_sym(r, &a).unwrap();
                let want = elem_sym_by_subsets(r, &a);
                assert!((got - want).abs() < 1e-9, "r={r}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn trace_and_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_sym(5, &mut rng);
        assert!((elem_sym(1, &a).unwrap() - a.as_matrix().trace()).abs() < 1e-12);
        assert!((elem_sym(5, &a).unwrap() - a.as_matrix().determinant()).abs() < 1e-12);
        assert!(elem_sym(6, &a).is_err());
    }

    #[test]
    fn top_cofactor_is_adjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_sym(4, &mut rng);
        let m = a.as_matrix();
        let adj = m.clone().try_inverse().unwrap() * m.determinant();
        let c = cofactor(4, &a).unwrap();
        assert!((c.as_matrix() - adj).abs().max() < 1e-8);
    }

    #[test]
    fn cofactor_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let h = 1e-6;
        for n in 2..=5 {
            let a = random_general(n, &mut rng);
            for r in 1..=n {
                let c = cofactor_general(r, &a).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        let mut ap = a.clone();
                        let mut am = a.clone();
                        ap[(i, j)] += h;
                        am[(i, j)] -= h;
                        let fd = (elem_sym_all_general(&ap)[r] - elem_sym_all_general(&am)[r])
                            / (2.0 * h);
                        assert!(
                            (fd - c[(i, j)]).abs() < 1e-6,
                            "n={n} r={r} ({i},{j}): {fd} vs {}",
                            c[(i, j)]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn second_cofactor_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let h = 1e-5;
        for n in 2..=4 {
            let a = random_general(n, &mut rng);
            for r in 1..=n {
                let t = second_cofactor_general(r, &a).unwrap();
                for k in 0..n {
                    for l in 0..n {
                        let mut ap = a.clone();
                        let mut am = a.clone();
                        ap[(k, l)] += h;
                        am[(k, l)] -= h;
                        let cp = cofactor_general(r, &ap).unwrap();
                        let cm = cofactor_general(r, &am).unwrap();
                        for i in 0..n {
                            for j in 0..n {
                                let fd = (cp[(i, j)] - cm[(i, j)]) / (2.0 * h);
                                assert!((fd - t.get(i, j, k, l)).abs() < 1e-6);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn second_cofactor_of_trace_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_sym(4, &mut rng);
        assert!(second_cofactor(1, &a).unwrap().is_zero());
    }

    #[test]
    fn second_cofactor_identity_constant_tensor() {
        // S_2 of I_3 + E is quadratic in E, so its Hessian is constant.
        let t = second_cofactor(2, &SymMatrix::identity(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let want = if i == j && k == l && i != k {
                            1.0
                        } else if i == l && j == k && i != j {
                            -1.0
                        } else {
                            0.0
                        };
                        assert!((t.get(i, j, k, l) - want).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn sym_matrix_rejects_asymmetry() {
        assert!(SymMatrix::from_row_slice(2, &[1.0, 2.0, 2.5, 1.0]).is_err());
    }
}
