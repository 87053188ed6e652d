//! Dense revised simplex for the Wulff support LP
//!
//! ```text
//! maximize (x, u)  subject to  (x, y_j) ≤ g_j,  j = 1..m,   x ∈ ℝ^n
//! ```
//!
//! solved through its dual `min gᵀλ, Yᵀλ = u, λ ≥ 0`, whose basis is only
//! `n × n`. The primal optimum is read off as the dual multipliers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 50_000;
/// Degenerate pivots tolerated under Dantzig pricing before switching to Bland.
const STALL_LIMIT: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    /// A maximizer `x` of `(x, u)`.
    pub point: Vec<f64>,
}

struct Problem<'a> {
    n: usize,
    directions: &'a [Vec<f64>],
    gauge: &'a [f64],
    rhs: DVector<f64>,
    artificial_sign: Vec<f64>,
}

impl Problem<'_> {
    fn m(&self) -> usize {
        self.directions.len()
    }

    /// Column `j`: real columns first, then the `n` artificial columns.
    fn column(&self, j: usize) -> DVector<f64> {
        if j < self.m() {
            DVector::from_column_slice(&self.directions[j])
        } else {
            let i = j - self.m();
            let mut e = DVector::zeros(self.n);
            e[i] = self.artificial_sign[i];
            e
        }
    }

    fn cost(&self, j: usize, phase_one: bool) -> f64 {
        match (phase_one, j < self.m()) {
            (true, true) => 0.0,
            (true, false) => 1.0,
            (false, true) => self.gauge[j],
            (false, false) => 0.0,
        }
    }
}

struct State {
    basis: Vec<usize>,
    binv: DMatrix<f64>,
    x_b: DVector<f64>,
}

impl State {
    fn refresh(&mut self, p: &Problem<'_>) -> Result<()> {
        let mut b = DMatrix::zeros(p.n, p.n);
        for (c, &j) in self.basis.iter().enumerate() {
            b.set_column(c, &p.column(j));
        }
        self.binv = b
            .try_inverse()
            .ok_or_else(|| Error::Solver("singular simplex basis".into()))?;
        self.x_b = &self.binv * &p.rhs;
        Ok(())
    }

    fn duals(&self, p: &Problem<'_>, phase_one: bool) -> DVector<f64> {
        let c_b = DVector::from_iterator(p.n, self.basis.iter().map(|&j| p.cost(j, phase_one)));
        self.binv.transpose() * c_b
    }
}

fn run_simplex(p: &Problem<'_>, st: &mut State, phase_one: bool) -> Result<()> {
    let m = p.m();
    let candidates = if phase_one { m + p.n } else { m };
    let mut stalled = 0usize;
    for _ in 0..MAX_ITERATIONS {
        let y = st.duals(p, phase_one);
        let scale = 1.0 + y.amax();
        let mut entering = None;
        let mut best = -TOL * scale;
        for j in 0..candidates {
            if st.basis.contains(&j) || (!phase_one && j >= m) {
                continue;
            }
            let d = p.cost(j, phase_one) - y.dot(&p.column(j));
            if stalled >= STALL_LIMIT {
                if d < -TOL * scale {
                    entering = Some(j);
                    break;
                }
            } else if d < best {
                best = d;
                entering = Some(j);
            }
        }
        let Some(q) = entering else {
            return Ok(());
        };
        let w = &st.binv * p.column(q);
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..p.n {
            if w[i] > TOL {
                let ratio = st.x_b[i].max(0.0) / w[i];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, r)) => {
                        if ratio < r - 1e-14 || (ratio <= r + 1e-14 && st.basis[i] < st.basis[li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((row, ratio)) = leave else {
            return Err(Error::Solver(
                "dual LP unbounded (primal infeasible)".into(),
            ));
        };
        if ratio <= 1e-14 {
            stalled += 1;
        } else {
            stalled = 0;
        }
        st.basis[row] = q;
        st.refresh(p)?;
    }
    Err(Error::Solver("simplex iteration limit reached".into()))
}

/// Maximizes `(x, u)` over `{x : (x, y_j) ≤ g_j}`.
pub fn solve_support_lp(directions: &[Vec<f64>], gauge: &[f64], u: &[f64]) -> Result<LpSolution> {
    let n = u.len();
    if directions.len() != gauge.len() {
        return Err(Error::domain(
            "directions and gauge values differ in length",
        ));
    }
    if directions.iter().any(|y| y.len() != n) {
        return Err(Error::domain("direction of wrong dimension"));
    }
    let artificial_sign: Vec<f64> = u
        .iter()
        .map(|&v| if v < 0.0 { -1.0 } else { 1.0 })
        .collect();
    let p = Problem {
        n,
        directions,
        gauge,
        rhs: DVector::from_column_slice(u),
        artificial_sign,
    };
    let m = p.m();
    let mut st = State {
        basis: (m..m + n).collect(),
        binv: DMatrix::identity(n, n),
        x_b: DVector::zeros(n),
    };
    st.refresh(&p)?;

    run_simplex(&p, &mut st, true)?;
    let infeasibility: f64 = st
        .basis
        .iter()
        .zip(st.x_b.iter())
        .filter(|(&j, _)| j >= m)
        .map(|(_, &v)| v)
        .sum();
    if infeasibility > 1e-8 {
        return Err(Error::Unbounded {
            direction: u.to_vec(),
        });
    }
    // Pivot degenerate artificials out of the basis.
    for row in 0..n {
        if st.basis[row] < m {
            continue;
        }
        let replacement = (0..m).find(|j| {
            !st.basis.contains(j) && (st.binv.row(row) * p.column(*j))[(0, 0)].abs() > 1e-7
        });
        match replacement {
            Some(j) => {
                st.basis[row] = j;
                st.refresh(&p)?;
            }
            None => {
                return Err(Error::Unbounded {
                    direction: u.to_vec(),
                })
            }
        }
    }

    run_simplex(&p, &mut st, false)?;
    let y = st.duals(&p, false);
    let value = st
        .basis
        .iter()
        .zip(st.x_b.iter())
        .map(|(&j, &v)| gauge[j] * v)
        .sum();
    Ok(LpSolution {
        value,
        point: y.iter().copied().collect(),
    })
}
