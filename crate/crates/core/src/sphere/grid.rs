use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{gauss_legendre, tangent_frame, TangentFrame};
use crate::error::{Error, Result};
use crate::util::{map_indexed, norm, pairwise_sum, unit_ball_volume};

pub const GRID_SCHEMA_VERSION: u32 = 1;

/// Largest dimension for which the tensor-product rule is offered.
const PRODUCT_MAX_DIMENSION: usize = 6;
const ICOSPHERE_MAX_LEVEL: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridMethod {
    /// Exact polar rules in `cos θ` times a uniform azimuthal rule.
    ProductAngular,
    /// Seeded uniform samples plus their antipodes, equal weights.
    MonteCarlo,
    /// Subdivided icosahedron (n = 3 only), vertex weights from spherical areas.
    IcosphereN3,
}

impl GridMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            GridMethod::ProductAngular => "product-angular",
            GridMethod::MonteCarlo => "monte-carlo",
            GridMethod::IcosphereN3 => "icosphere-n3",
        }
    }
}

impl std::str::FromStr for GridMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product-angular" | "product" => Ok(GridMethod::ProductAngular),
            "monte-carlo" | "mc" => Ok(GridMethod::MonteCarlo),
            "icosphere-n3" | "icosphere" => Ok(GridMethod::IcosphereN3),
            other => Err(Error::config(format!("unknown grid method `{other}`"))),
        }
    }
}

/// `|S^{n-1}| = n κ_n`.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// Quadrature nodes and positive weights on `S^{n-1}`, with a tangent frame
/// cached per node. The node set is always closed under `x ↦ −x`, with equal
/// weights on antipodal pairs.
#[derive(Debug, Clone)]
pub struct SphericalGrid {
    dimension: usize,
    method: GridMethod,
    resolution: usize,
    seed: u64,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    frames: Vec<TangentFrame>,
}

/// Versioned on-disk form of a grid (frames are rebuilt on load).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    pub schema_version: u32,
    pub dimension: usize,
    pub method: GridMethod,
    pub resolution: usize,
    pub seed: u64,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphericalGrid {
    /// Builds a grid on `S^{n-1}`.
    ///
    /// * `product-angular`: `n ≤ 6`. For `n = 2` the azimuthal rule has
    ///   `resolution` nodes (rounded up to even); for `n ≥ 3` each polar angle
    ///   gets `resolution` nodes and the azimuth `2·resolution`.
    /// * `monte-carlo`: `2·resolution` nodes (samples plus antipodes).
    /// * `icosphere-n3`: `n = 3`, subdivision level `resolution − 1`.
    pub fn build(n: usize, resolution: usize, method: GridMethod, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!(
                "sphere dimension needs n >= 2, got {n}"
            )));
        }
        if resolution < 1 {
            return Err(Error::domain("grid resolution must be >= 1"));
        }
        let (nodes, weights) = match method {
            GridMethod::ProductAngular => {
                if n > PRODUCT_MAX_DIMENSION {
                    return Err(Error::config(format!(
                        "product-angular grids are limited to n <= {PRODUCT_MAX_DIMENSION}; use monte-carlo for n = {n}"
                    )));
                }
                product_angular(n, resolution)
            }
            GridMethod::MonteCarlo => monte_carlo(n, resolution, seed),
            GridMethod::IcosphereN3 => {
                if n != 3 {
                    return Err(Error::config(format!(
                        "icosphere grids exist only for n = 3, got n = {n}"
                    )));
                }
                if resolution - 1 > ICOSPHERE_MAX_LEVEL {
                    return Err(Error::config(format!(
                        "icosphere level capped at {ICOSPHERE_MAX_LEVEL}"
                    )));
                }
                icosphere(resolution - 1)
            }
        };
        Self::from_parts(n, method, resolution, seed, nodes, weights)
    }

    fn from_parts(
        dimension: usize,
        method: GridMethod,
        resolution: usize,
        seed: u64,
        nodes: Vec<Vec<f64>>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::config(
                "grid needs matching, non-empty nodes and weights",
            ));
        }
        for (x, &w) in nodes.iter().zip(&weights) {
            if x.len() != dimension {
                return Err(Error::config("node of wrong dimension"));
            }
            if (norm(x) - 1.0).abs() > 1e-12 {
                return Err(Error::config(format!("node {x:?} is not a unit vector")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::config(format!("non-positive weight {w}")));
            }
        }
        let frames = nodes
            .iter()
            .map(|x| tangent_frame(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(SphericalGrid {
            dimension,
            method,
            resolution,
            seed,
            nodes,
            weights,
            frames,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn method(&self) -> GridMethod {
        self.method
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn frames(&self) -> &[TangentFrame] {
        &self.frames
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// Tolerance on `Σ w = |S^{n-1}|` promised by the method.
    pub fn area_tolerance(&self) -> f64 {
        match self.method {
            GridMethod::ProductAngular | GridMethod::IcosphereN3 => 1e-10,
            GridMethod::MonteCarlo => 3.0 / (self.len() as f64).sqrt(),
        }
    }

    /// Resolution of the reference grid in dimension `n`.
    pub fn reference_resolution(n: usize) -> usize {
        match n {
            0..=2 => 64,
            3 => 24,
            4 => 12,
            5 => 8,
            6 => 6,
            _ => 20_000,
        }
    }

    /// Product-angular for `n ≤ 6`, Monte Carlo (seed 0) above.
    pub fn reference(n: usize) -> Result<Self> {
        let method = if n <= 6 {
            GridMethod::ProductAngular
        } else {
            GridMethod::MonteCarlo
        };
        SphericalGrid::build(n, Self::reference_resolution(n), method, 0)
    }

    /// The same method at roughly half the resolution, for refinement estimates.
    pub fn coarsened(&self) -> Option<SphericalGrid> {
        let res = match self.method {
            GridMethod::IcosphereN3 => self.resolution.checked_sub(1)?,
            _ => self.resolution / 2,
        };
        if res < 1 {
            return None;
        }
        SphericalGrid::build(self.dimension, res, self.method, self.seed).ok()
    }

    /// Per-node evaluation in node order, in parallel when enabled.
    pub fn map_nodes<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&[f64], &TangentFrame) -> Result<T> + Sync + Send,
    {
        map_indexed(self.len(), |i| f(&self.nodes[i], &self.frames[i]))
            .into_iter()
            .collect()
    }

    /// `Σ_j w_j v_j` with a fixed (pairwise) reduction order.
    pub fn weighted_sum(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        let terms: Vec<f64> = self
            .weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .collect();
        pairwise_sum(&terms)
    }

    /// `Σ_j w_j f(node_j)`; a non-finite value is reported with its node.
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&[f64]) -> f64 + Sync + Send,
    {
        let values = self.map_nodes(|x, _| {
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation {
                    node: x.to_vec(),
                    value: v,
                })
            }
        })?;
        Ok(self.weighted_sum(&values))
    }

    /// Integral of a field that may also use the cached tangent frame.
    pub fn integrate_with_frames<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&[f64], &TangentFrame) -> Result<f64> + Sync + Send,
    {
        let values = self.map_nodes(|x, frame| {
            let v = f(x, frame)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation {
                    node: x.to_vec(),
                    value: v,
                })
            }
        })?;
        Ok(self.weighted_sum(&values))
    }

    /// Hex SHA-256 over dimension, method, node and weight bit patterns.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.dimension as u64).to_le_bytes());
        hasher.update(self.method.as_str().as_bytes());
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            for xi in x {
                hasher.update(xi.to_bits().to_le_bytes());
            }
            hasher.update(w.to_bits().to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }

    pub fn to_document(&self) -> GridDocument {
        GridDocument {
            schema_version: GRID_SCHEMA_VERSION,
            dimension: self.dimension,
            method: self.method,
            resolution: self.resolution,
            seed: self.seed,
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
        }
    }

    pub fn from_document(doc: GridDocument) -> Result<Self> {
        if doc.schema_version != GRID_SCHEMA_VERSION {
            return Err(Error::config(format!(
                "unsupported grid schema version {} (expected {GRID_SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Self::from_parts(
            doc.dimension,
            doc.method,
            doc.resolution,
            doc.seed,
            doc.nodes,
            doc.weights,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(serde_json::from_str(s)?)
    }
}

fn normalized(mut x: Vec<f64>) -> Vec<f64> {
    let r = norm(&x);
    x.iter_mut().for_each(|v| *v /= r);
    x
}

fn product_angular(n: usize, res: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    if n == 2 {
        let m = res.max(2).div_ceil(2) * 2;
        let w = 2.0 * PI / m as f64;
        let nodes = (0..m)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / m as f64;
                vec![phi.cos(), phi.sin()]
            })
            .collect();
        return (nodes, vec![w; m]);
    }

    // One polar rule per level a, integrating against sin^{n-2-a} θ dθ.
    let polar: Vec<Vec<(f64, f64)>> = (0..n - 2).map(|a| polar_rule(res, n - 2 - a)).collect();
    let m = 2 * res;
    let dphi = 2.0 * PI / m as f64;

    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    // Odometer over the n-2 polar indices.
    let n_polar = n - 2;
    let mut idx = vec![0usize; n_polar];
    loop {
        let mut x = vec![0.0; n];
        let mut sin_prod = 1.0;
        let mut w = 1.0;
        for (a, &i) in idx.iter().enumerate() {
            let (cos_t, wq) = polar[a][i];
            x[a] = sin_prod * cos_t;
            w *= wq;
            sin_prod *= (1.0 - cos_t * cos_t).max(0.0).sqrt();
        }
        for j in 0..m {
            let phi = dphi * j as f64;
            let mut y = x.clone();
            y[n - 2] = sin_prod * phi.cos();
            y[n - 1] = sin_prod * phi.sin();
            nodes.push(normalized(y));
            weights.push(w * dphi);
        }
        // advance
        let mut a = 0;
        while a < n_polar {
            idx[a] += 1;
            if idx[a] < res {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
        if a == n_polar {
            break;
        }
    }
    (nodes, weights)
}

/// Nodes `cos θ_i` and weights for `∫_0^π f(cos θ) sin^m θ dθ = ∫_{-1}^1 f(t) (1−t²)^{(m−1)/2} dt`.
///
/// Odd `m`: Gauss–Legendre with the polynomial factor folded into the weights.
/// Even `m`: Chebyshev of the second kind with the factor `(1−t²)^{(m−2)/2}` folded in.
/// Both are exact on polynomials of degree `≤ 2 order − m`.
fn polar_rule(order: usize, m: usize) -> Vec<(f64, f64)> {
    if m % 2 == 1 {
        let (t, w) = gauss_legendre(order);
        t.iter()
            .zip(&w)
            .map(|(&t, &w)| (t, w * (1.0 - t * t).powi(((m - 1) / 2) as i32)))
            .collect()
    } else {
        let step = PI / (order + 1) as f64;
        (1..=order)
            .map(|j| {
                let th = step * j as f64;
                let t = th.cos();
                (t, step * th.sin().powi(2) * th.sin().powi((m - 2) as i32))
            })
            .collect()
    }
}

fn monte_carlo(n: usize, res: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(2 * res);
    while nodes.len() < 2 * res {
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        if norm(&x) < 1e-8 {
            continue;
        }
        let x = normalized(x);
        let neg = x.iter().map(|v| -v).collect();
        nodes.push(x);
        nodes.push(neg);
    }
    let w = sphere_area(n) / nodes.len() as f64;
    let len = nodes.len();
    (nodes, vec![w; len])
}

fn icosphere(level: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    use std::collections::HashMap;

    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vec<f64>> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .iter()
    .map(|v| normalized(v.to_vec()))
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vec<f64>>| -> usize {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                let m: Vec<f64> = verts[a].iter().zip(&verts[b]).map(|(x, y)| x + y).collect();
                verts.push(normalized(m));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    // Each spherical triangle's area is split equally among its vertices;
    // the areas tile the sphere, so the weights sum to 4π.
    let mut weights = vec![0.0; verts.len()];
    for &[a, b, c] in &faces {
        let area = spherical_triangle_area(&verts[a], &verts[b], &verts[c]);
        for v in [a, b, c] {
            weights[v] += area / 3.0;
        }
    }
    (verts, weights)
}

/// Van Oosterom–Strackee solid angle.
fn spherical_triangle_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let cross = [
        b[1] * c[2] - b[2] * c[1],
        b[2] * c[0] - b[0] * c[2],
        b[0] * c[1] - b[1] * c[0],
    ];
    let triple: f64 = a.iter().zip(&cross).map(|(x, y)| x * y).sum();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    let denom = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * triple.abs().atan2(denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_centrally_symmetric(grid: &SphericalGrid) -> bool {
        grid.nodes().iter().zip(grid.weights()).all(|(x, w)| {
            grid.nodes().iter().zip(grid.weights()).any(|(y, v)| {
                x.iter().zip(y).all(|(a, b)| (a + b).abs() < 1e-12)
                    && (w - v).abs() < 1e-14 * w.max(1.0)
            })
        })
    }

    #[test]
    fn circle_rule() {
        let g = SphericalGrid::build(2, 4, GridMethod::ProductAngular, 0).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.weights().iter().all(|&w| w == g.weights()[0]));
        assert!((g.total_weight() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn area_of_two_sphere() {
        let g = SphericalGrid::build(3, 24, GridMethod::ProductAngular, 0).unwrap();
        assert!((g.total_weight() - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn product_grids_match_sphere_area() {
        for n in 2..=6 {
            let res = if n <= 4 { 16 } else { 8 };
            let g = SphericalGrid::build(n, res, GridMethod::ProductAngular, 0).unwrap();
            assert!(
                (g.total_weight() - sphere_area(n)).abs() < 1e-10,
                "n = {n}: {} vs {}",
                g.total_weight(),
                sphere_area(n)
            );
        }
    }

    #[test]
    fn monte_carlo_weights_sum_exactly() {
        let g = SphericalGrid::build(5, 500, GridMethod::MonteCarlo, 7).unwrap();
        let target = 8.0 * PI * PI / 3.0;
        assert!((g.total_weight() - target).abs() < 1e-10);
        let again = SphericalGrid::build(5, 500, GridMethod::MonteCarlo, 7).unwrap();
        assert_eq!(g.fingerprint(), again.fingerprint());
    }

    #[test]
    fn icosphere_area_and_symmetry() {
        let g = SphericalGrid::build(3, 3, GridMethod::IcosphereN3, 0).unwrap();
        assert_eq!(g.len(), 162);
        assert!((g.total_weight() - 4.0 * PI).abs() < 1e-10);
        assert!(is_centrally_symmetric(&g));
    }

    #[test]
    fn grids_are_centrally_symmetric() {
        for (n, res) in [(2, 6), (3, 5), (4, 4)] {
            let g = SphericalGrid::build(n, res, GridMethod::ProductAngular, 0).unwrap();
            assert!(is_centrally_symmetric(&g), "n = {n}");
        }
        let g = SphericalGrid::build(4, 30, GridMethod::MonteCarlo, 1).unwrap();
        assert!(is_centrally_symmetric(&g));
    }

    #[test]
    fn unsupported_pairings() {
        assert!(matches!(
            SphericalGrid::build(4, 2, GridMethod::IcosphereN3, 0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            SphericalGrid::build(7, 2, GridMethod::ProductAngular, 0),
            Err(Error::Config(_))
        ));
        assert!(SphericalGrid::build(1, 2, GridMethod::MonteCarlo, 0).is_err());
        assert!(SphericalGrid::build(3, 0, GridMethod::ProductAngular, 0).is_err());
    }

    #[test]
    fn node_count_grows_with_resolution() {
        for method in [GridMethod::ProductAngular, GridMethod::MonteCarlo] {
            let mut last = 0;
            for res in 1..8 {
                let g = SphericalGrid::build(3, res, method, 0).unwrap();
                assert!(g.len() >= last);
                last = g.len();
            }
        }
    }

    #[test]
    fn integrate_reports_bad_node() {
        let g = SphericalGrid::build(3, 4, GridMethod::ProductAngular, 0).unwrap();
        let err = g
            .integrate(|x| if x[0] > 0.5 { f64::NAN } else { 1.0 })
            .unwrap_err();
        assert!(matches!(err, Error::Evaluation { .. }));
    }

    #[test]
    fn json_round_trip_preserves_fingerprint() {
        let g = SphericalGrid::build(4, 3, GridMethod::ProductAngular, 0).unwrap();
        let back = SphericalGrid::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back.fingerprint(), g.fingerprint());
        assert_eq!(back.frames(), g.frames());

        let mut doc = g.to_document();
        doc.schema_version = 99;
        assert!(SphericalGrid::from_document(doc).is_err());
    }
}
