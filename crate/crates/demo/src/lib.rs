//! Browser bindings. Every export returns a JSON string so the page needs no
//! generated TypeScript types; errors surface as JS exceptions.
//!
//! The `*_json` functions without the `js_` prefix are plain Rust and carry
//! the logic, so they can be tested natively.

use lpbm_core::bodies::{direction_set, Body, PMeanSpec, WulffShape};
use lpbm_core::counterexamples::threshold_table;
use lpbm_core::intrinsic::vk_box;
use lpbm_core::sphere::{GridMethod, SphericalGrid, TestFunction};
use lpbm_core::variation::{concavity_scan, linspace, VariationPath};
use lpbm_core::{Error, Result};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct ThresholdRow {
    n: usize,
    k: usize,
    pbar: f64,
    branch: &'static str,
}

pub fn thresholds_json(n_min: usize, n_max: usize) -> Result<String> {
    let rows: Vec<ThresholdRow> = threshold_table(n_min, n_max)?
        .into_iter()
        .map(|t| ThresholdRow {
            n: t.n,
            k: t.k,
            pbar: t.value,
            branch: t.branch.as_str(),
        })
        .collect();
    Ok(serde_json::to_string(&rows)?)
}

/// Coarser than the reference grids; enough for a plot and fast in the browser.
fn demo_grid(n: usize) -> Result<SphericalGrid> {
    let res = match n {
        3 => 12,
        4 => 8,
        5 => 5,
        _ => {
            return Err(Error::Config(format!(
                "the demo handles n in 3..=5, got {n}"
            )))
        }
    };
    SphericalGrid::build(n, res, GridMethod::ProductAngular, 0)
}

#[derive(Serialize)]
struct Curve {
    s: Vec<f64>,
    log_f: Vec<f64>,
    h: Vec<f64>,
    verdict: &'static str,
}

/// `log f_k(s)` and `H(s)` along `h = exp(s·ε(x_1² − 1/n))`.
pub fn concavity_json(n: usize, k: usize, amplitude: f64, steps: usize) -> Result<String> {
    let psi = TestFunction::centered_coordinate_square(n, 0)?.with_amplitude(amplitude);
    let path = VariationPath::unit_ball(psi, k, demo_grid(n)?)?;
    let r = concavity_scan(&path, &linspace(-2.0, 2.0, steps.max(2)))?;
    Ok(serde_json::to_string(&Curve {
        log_f: r.f.iter().map(|f| f.ln()).collect(),
        s: r.s,
        h: r.h,
        verdict: r.verdict.as_str(),
    })?)
}

#[derive(Serialize)]
struct Section {
    /// Outline of the projection onto the `(axes[0], axes[1])` plane.
    outline: Vec<[f64; 2]>,
    /// Half-lengths of the enclosing box in that plane.
    box_half: [f64; 2],
    /// `V_k` of the enclosing box with half-lengths the `p`-means of `a0`, `a1`.
    vk_box: f64,
    /// `((1−t)V_k(K_0)^{p/k} + t V_k(K_1)^{p/k})^{k/p}` (geometric mean at `p = 0`).
    vk_mean: f64,
}

/// Projection of the outer Wulff shape of `(1−t)·K_0 +_p t·K_1` for boxes
/// `K_i = ∏[−a_i, a_i]`, traced by LP maximizers in `samples` plane directions.
pub fn wulff_section_json(
    a0: &[f64],
    a1: &[f64],
    p: f64,
    t: f64,
    k: usize,
    axes: [usize; 2],
    samples: usize,
) -> Result<String> {
    let n = a0.len();
    if a1.len() != n || !(3..=5).contains(&n) {
        return Err(Error::Config(
            "boxes must share a dimension in 3..=5".into(),
        ));
    }
    if axes[0] == axes[1] || axes.iter().any(|&i| i >= n) {
        return Err(Error::Config("need two distinct axes below n".into()));
    }
    let spec = PMeanSpec::new(
        p,
        t,
        Body::Box { a: a0.to_vec() },
        Body::Box { a: a1.to_vec() },
    )?;
    let directions = direction_set(&demo_grid(n)?, true);
    let shape = WulffShape::new(directions.clone(), spec.gauge_on(&directions)?)?;
    let mut outline = Vec::with_capacity(samples);
    for j in 0..samples.max(8) {
        let theta = std::f64::consts::TAU * j as f64 / samples.max(8) as f64;
        let mut u = vec![0.0; n];
        u[axes[0]] = theta.cos();
        u[axes[1]] = theta.sin();
        let x = shape.support_point(&u)?.point;
        outline.push([x[axes[0]], x[axes[1]]]);
    }
    let e = |i: usize| -> Result<f64> {
        let mut u = vec![0.0; n];
        u[i] = 1.0;
        spec.support(&u)
    };
    let half: Vec<f64> = (0..n).map(e).collect::<Result<_>>()?;
    let (v0, v1) = (vk_box(a0, k)?.value, vk_box(a1, k)?.value);
    let q = p / k as f64;
    let vk_mean = if p == 0.0 {
        v0.powf(1.0 - t) * v1.powf(t)
    } else {
        ((1.0 - t) * v0.powf(q) + t * v1.powf(q)).powf(1.0 / q)
    };
    Ok(serde_json::to_string(&Section {
        outline,
        box_half: [half[axes[0]], half[axes[1]]],
        vk_box: vk_box(&half, k)?.value,
        vk_mean,
    })?)
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = thresholds)]
pub fn js_thresholds(n_min: usize, n_max: usize) -> std::result::Result<String, JsError> {
    js(thresholds_json(n_min, n_max))
}

#[wasm_bindgen(js_name = concavityCurve)]
pub fn js_concavity(
    n: usize,
    k: usize,
    amplitude: f64,
    steps: usize,
) -> std::result::Result<String, JsError> {
    js(concavity_json(n, k, amplitude, steps))
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen(js_name = wulffSection)]
pub fn js_wulff_section(
    a0: Vec<f64>,
    a1: Vec<f64>,
    p: f64,
    t: f64,
    k: usize,
    axis_x: usize,
    axis_y: usize,
    samples: usize,
) -> std::result::Result<String, JsError> {
    js(wulff_section_json(
        &a0,
        &a1,
        p,
        t,
        k,
        [axis_x, axis_y],
        samples,
    ))
}
