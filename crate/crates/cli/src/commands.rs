//! One function per subcommand. Each resolves its defaults, runs the library
//! operation, and returns an [`Outcome`]; nothing here touches the filesystem.

use anyhow::{bail, Result};
use lpbm_core::bodies::Body;
use lpbm_core::counterexamples::{
    sweep, threshold_table, verify_counterexample_at, Conclusion, CounterexampleInstance,
};
use lpbm_core::intrinsic::intrinsic_volume;
use lpbm_core::sphere::TestFunction;
use lpbm_core::variation::{
    christoffel_max_residual, concavity_scan_with_strictness, ibp_check, linspace, poincare_check,
    PoincareRatio, VariationPath,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::report::{to_csv, GridInfo, Outcome};

const CONCAVITY_STRICTNESS: f64 = 1e-8;
const POINCARE_TOL: f64 = 1e-4;
const IBP_TOL: f64 = 1e-5;

fn require<T>(v: Option<T>, flag: &str, cmd: &str) -> Result<T> {
    match v {
        Some(v) => Ok(v),
        None => bail!("{cmd} needs {flag}"),
    }
}

#[derive(Serialize)]
struct VkRow {
    k: usize,
    value: f64,
    method: &'static str,
    error_estimate: f64,
    non_positive_nodes: usize,
}

pub fn vk(cfg: &ExperimentConfig) -> Result<Outcome> {
    let body = cfg.body()?.unwrap_or(Body::Ball { radius: 1.0 });
    let n = cfg.dimension(Some(&body))?;
    let ks: Vec<usize> = match cfg.k {
        Some(k) if (1..=n).contains(&k) => vec![k],
        Some(k) => bail!("--k must lie in 1..={n}, got {k}"),
        None => (1..=n).collect(),
    };
    let grid = match body {
        Body::LogPerturbedBall { .. } => Some(cfg.grid(n)?),
        _ => None,
    };
    let mut rows = Vec::new();
    for k in ks {
        let r = intrinsic_volume(&body, n, k, grid.as_ref())?;
        rows.push(VkRow {
            k,
            value: r.value,
            method: r.method.as_str(),
            error_estimate: r.error_estimate,
            non_positive_nodes: r.non_positive_nodes,
        });
    }
    let summary = rows
        .iter()
        .map(|r| {
            format!(
                "V_{} = {:.12} ({}, error estimate {:.1e})",
                r.k, r.value, r.method, r.error_estimate
            )
        })
        .collect();
    Ok(Outcome {
        result: json!({ "n": n, "body": body, "volumes": rows }),
        grid: grid.as_ref().map(GridInfo::from),
        csv: to_csv(&rows)?,
        summary,
        success: true,
    })
}

#[derive(Serialize)]
struct ConcavityRow {
    s: f64,
    f: f64,
    f1: f64,
    f2: f64,
    #[serde(rename = "H")]
    h: f64,
}

pub fn concavity(cfg: &ExperimentConfig) -> Result<Outcome> {
    let base = cfg.body()?;
    let n = cfg.dimension(base.as_ref())?;
    let k = cfg.k.unwrap_or(2);
    let psi = cfg.psi(n, "x1sq", 0.01)?;
    let s_grid = linspace(
        cfg.s_min.unwrap_or(-2.0),
        cfg.s_max.unwrap_or(2.0),
        cfg.s_steps.unwrap_or(21),
    );
    let grid = cfg.grid(n)?;
    let info = GridInfo::from(&grid);
    let path = match base {
        Some(b) => VariationPath::new(b, psi, k, grid)?,
        None => VariationPath::unit_ball(psi, k, grid)?,
    };
    let r =
        concavity_scan_with_strictness(&path, &s_grid, cfg.tol.unwrap_or(CONCAVITY_STRICTNESS))?;
    let rows: Vec<ConcavityRow> = (0..r.s.len())
        .map(|i| ConcavityRow {
            s: r.s[i],
            f: r.f[i],
            f1: r.f1[i],
            f2: r.f2[i],
            h: r.h[i],
        })
        .collect();
    let top = r.h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let summary = vec![
        format!(
            "n = {n}, k = {k}, {} points on [{}, {}]",
            r.s.len(),
            s_grid[0],
            s_grid[s_grid.len() - 1]
        ),
        format!("f_k(0) = {:.12}, tolerance {:.3e}", r.f0, r.tolerance),
        format!("max H = {top:.6e}, max |H| = {:.6e}", r.max_abs_h()),
        format!("verdict: {}", r.verdict.as_str()),
    ];
    Ok(Outcome {
        success: r.verdict.is_concave(),
        result: serde_json::to_value(&r)?,
        grid: Some(info),
        csv: to_csv(&rows)?,
        summary,
    })
}

#[derive(Serialize)]
struct ThresholdRow {
    n: usize,
    k: usize,
    pbar: f64,
    branch: &'static str,
    count: String,
}

pub fn thresholds(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (lo, hi) = match cfg.n {
        Some(n) => (n, n),
        None => (cfg.n_min.unwrap_or(3), cfg.n_max.unwrap_or(10)),
    };
    let table = threshold_table(lo, hi)?;
    let rows: Vec<ThresholdRow> = table
        .iter()
        .filter(|t| cfg.k.is_none_or(|k| k == t.k))
        .map(|t| ThresholdRow {
            n: t.n,
            k: t.k,
            pbar: t.value,
            branch: t.branch.as_str(),
            count: t.count.to_string(),
        })
        .collect();
    let mut summary = vec![format!("{:>3} {:>3} {:>18}  branch", "n", "k", "pbar")];
    summary.extend(
        rows.iter()
            .map(|r| format!("{:>3} {:>3} {:>18.15}  {}", r.n, r.k, r.pbar, r.branch)),
    );
    Ok(Outcome {
        result: json!({ "rows": rows }),
        grid: None,
        csv: to_csv(&rows)?,
        summary,
        success: true,
    })
}

#[derive(Serialize)]
struct CounterexampleRow {
    n: usize,
    k: usize,
    branch: &'static str,
    pbar: f64,
    p: f64,
    lhs_bound: f64,
    rhs: f64,
    margin: f64,
    conclusion: &'static str,
}

pub fn counterexample(cfg: &ExperimentConfig) -> Result<Outcome> {
    if cfg.sweep == Some(true) {
        return counterexample_sweep(cfg);
    }
    let n = require(cfg.n, "--n", "counterexample")?;
    let k = require(cfg.k, "--k", "counterexample")?;
    let p = require(cfg.p, "--p", "counterexample")?;
    let inst = CounterexampleInstance::with_t(n, k, p, cfg.t.unwrap_or(0.5))?;
    let v = verify_counterexample_at(&inst)?;
    let requested_below = p < v.threshold.value;
    let success = !requested_below || v.verdict.conclusion == Conclusion::InequalityFails;
    let row = CounterexampleRow {
        n,
        k,
        branch: v.threshold.branch.as_str(),
        pbar: v.threshold.value,
        p,
        lhs_bound: v.bound.box_value,
        rhs: v.vk_target,
        margin: v.vk_margin,
        conclusion: v.verdict.conclusion.as_str(),
    };
    let mut summary = vec![
        format!(
            "n = {n}, k = {k}, p = {p}, t = {}, pbar = {:.15} ({})",
            v.t, v.threshold.value, row.branch
        ),
        format!(
            "V_k(K_p) <= {:.12} against (1-t)V_k(K_0) +_p t V_k(K_1) = {}",
            v.bound.box_value, v.vk_target
        ),
        format!("margin {:.12}", v.vk_margin),
        format!("conclusion: {}", row.conclusion),
    ];
    if !requested_below {
        summary.push("p is not below pbar: the cube construction certifies nothing here".into());
    }
    Ok(Outcome {
        result: serde_json::to_value(&v)?,
        grid: None,
        csv: to_csv(&[row])?,
        summary,
        success,
    })
}

fn counterexample_sweep(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (lo, hi) = match cfg.n {
        Some(n) => (n, n),
        None => (cfg.n_min.unwrap_or(3), cfg.n_max.unwrap_or(8)),
    };
    let fractions = cfg.fractions.clone().unwrap_or_else(|| vec![0.5]);
    let rows: Vec<CounterexampleRow> = sweep(lo, hi, &fractions)?
        .into_iter()
        .filter(|r| cfg.k.is_none_or(|k| k == r.k))
        .map(|r| CounterexampleRow {
            n: r.n,
            k: r.k,
            branch: r.branch.as_str(),
            pbar: r.pbar,
            p: r.p,
            lhs_bound: r.lhs_bound,
            rhs: r.rhs,
            margin: r.margin,
            conclusion: r.conclusion.as_str(),
        })
        .collect();
    let below = rows.iter().filter(|r| r.p < r.pbar);
    let missed: Vec<String> = below
        .filter(|r| r.conclusion != Conclusion::InequalityFails.as_str())
        .map(|r| format!("({}, {}, p = {})", r.n, r.k, r.p))
        .collect();
    let fails = rows
        .iter()
        .filter(|r| r.conclusion == "inequality-fails")
        .count();
    let mut summary = vec![format!("{} rows, {fails} certified failures", rows.len())];
    if !missed.is_empty() {
        summary.push(format!("not certified below pbar: {}", missed.join(", ")));
    }
    Ok(Outcome {
        result: json!({ "fractions": fractions, "rows": rows }),
        grid: None,
        csv: to_csv(&rows)?,
        summary,
        success: missed.is_empty(),
    })
}

#[derive(Serialize)]
struct ScalarRow {
    quantity: &'static str,
    value: f64,
}

pub fn christoffel(cfg: &ExperimentConfig) -> Result<Outcome> {
    let body = cfg.body()?.unwrap_or(Body::Ball { radius: 1.0 });
    let n = cfg.dimension(Some(&body))?;
    let k = cfg.k.unwrap_or(2);
    let p = cfg.p.unwrap_or(0.0);
    let grid = cfg.grid(n)?;
    let residual = christoffel_max_residual(&body, p, k, &grid)?;
    let success = cfg.tol.is_none_or(|tol| residual <= tol);
    Ok(Outcome {
        result: json!({ "n": n, "k": k, "p": p, "body": body, "max_residual": residual }),
        grid: Some(GridInfo::from(&grid)),
        csv: to_csv(&[ScalarRow {
            quantity: "max_residual",
            value: residual,
        }])?,
        summary: vec![
            format!("{} in dimension {n}, k = {k}, p = {p}", body.kind()),
            format!("max |h^(1-p) S_(k-1)(Q[h]) - C(n-1,k-1)| = {residual:.6e}"),
        ],
        success,
    })
}

pub fn poincare(cfg: &ExperimentConfig) -> Result<Outcome> {
    let n = cfg.dimension(None)?;
    let psi = cfg.psi(n, "x1sq", 1.0)?;
    let grid = cfg.grid(n)?;
    let r = poincare_check(&psi, &grid)?;
    let tol = cfg.tol.unwrap_or(POINCARE_TOL);
    let (ratio, success) = match r.ratio {
        PoincareRatio::Value(v) => (v, v <= 1.0 + tol),
        PoincareRatio::ExactEquality => (1.0, true),
    };
    Ok(Outcome {
        result: json!({ "n": n, "psi": psi, "report": r, "tolerance": tol }),
        grid: Some(GridInfo::from(&grid)),
        csv: to_csv(&[
            ScalarRow {
                quantity: "lhs",
                value: r.lhs,
            },
            ScalarRow {
                quantity: "rhs",
                value: r.rhs,
            },
            ScalarRow {
                quantity: "ratio",
                value: ratio,
            },
        ])?,
        summary: vec![
            format!("int psi^2 = {:.12}", r.lhs),
            format!("(1/2n) int |grad psi|^2 = {:.12}", r.rhs),
            format!("ratio = {ratio:.12}"),
        ],
        success,
    })
}

pub fn ibp(cfg: &ExperimentConfig) -> Result<Outcome> {
    let given = cfg.body()?;
    let n = cfg.dimension(given.as_ref())?;
    let k = cfg.k.unwrap_or(1);
    let h = match given {
        Some(b) => b,
        None => Body::log_perturbed_ball(
            TestFunction::centered_coordinate_square(n, 0)?.with_amplitude(0.05),
            1.0,
        )?,
    };
    let psi = cfg.psi(n, "harmonic4", 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
    let phi = TestFunction::random_quadratic(n, 1.0, &mut rng);
    let phi_bar = TestFunction::random_quadratic(n, 1.0, &mut rng);
    let grid = cfg.grid(n)?;
    let r = ibp_check(&h, &phi, &phi_bar, &psi, k, &grid)?;
    let tol = cfg.tol.unwrap_or(IBP_TOL);
    let success =
        r.residual1 <= tol * r.magnitude1.max(1.0) && r.residual2 <= tol * r.magnitude2.max(1.0);
    Ok(Outcome {
        result: json!({ "n": n, "k": k, "h": h, "psi": psi, "phi": phi, "phi_bar": phi_bar, "residuals": r, "tolerance": tol }),
        grid: Some(GridInfo::from(&grid)),
        csv: to_csv(&[
            ScalarRow {
                quantity: "residual1",
                value: r.residual1,
            },
            ScalarRow {
                quantity: "residual2",
                value: r.residual2,
            },
            ScalarRow {
                quantity: "magnitude1",
                value: r.magnitude1,
            },
            ScalarRow {
                quantity: "magnitude2",
                value: r.magnitude2,
            },
        ])?,
        summary: vec![
            format!(
                "first identity: residual {:.3e} (magnitude {:.6})",
                r.residual1, r.magnitude1
            ),
            format!(
                "second identity: residual {:.3e} (magnitude {:.6})",
                r.residual2, r.magnitude2
            ),
        ],
        success,
    })
}
