//! Stochastic-geometry instance generation and the dropped-edge bound.
//!
//! Instances come from a homogeneous Poisson point process on a rectangle:
//! the point count is Poisson(lambda * area), positions are uniform, and each
//! pair connects independently with probability `g(x_i - x_j)` given by a
//! radially nonincreasing connection function, thinned by the edge density.
//! `excluded_edge_bound` evaluates `(lambda/2) * integral of g over the region where
//! either coordinate offset exceeds the cell size` - the expected reuse-ratio
//! loss incurred by snapping the instance onto the cell lattice - and
//! `measure_excluded_edge_rate` estimates the same quantity empirically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate;
use crate::matrix_graph::grid_dims;
use crate::seed::{self, Stage};

/// Radially nonincreasing connection probability `g(x)`.
///
/// The boolean kind connects exactly within distance `2 * radius`; the
/// radial-exponential kind uses `exp(-beta * |x|^2)` and exists to exercise
/// the nonzero dropped-edge bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConnectionModel {
    Boolean { radius: f64 },
    RadialExponential { beta: f64 },
}

impl ConnectionModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ConnectionModel::Boolean { radius } => {
                if !radius.is_finite() || radius < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "boolean radius must be finite and nonnegative, got {radius}"
                    )));
                }
            }
            ConnectionModel::RadialExponential { beta } => {
                if !beta.is_finite() || beta <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "radial-exponential beta must be finite and positive, got {beta}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Connection probability for a plane offset of squared length `dist2`.
    pub fn prob_at_dist2(&self, dist2: f64) -> f64 {
        match *self {
            ConnectionModel::Boolean { radius } => {
                if dist2 <= (2.0 * radius) * (2.0 * radius) {
                    1.0
                } else {
                    0.0
                }
            }
            ConnectionModel::RadialExponential { beta } => (-beta * dist2).exp(),
        }
    }

    /// Plane integral of g; finite for both kinds.
    pub fn plane_integral(&self) -> f64 {
        match *self {
            ConnectionModel::Boolean { radius } => {
                std::f64::consts::PI * (2.0 * radius) * (2.0 * radius)
            }
            ConnectionModel::RadialExponential { beta } => std::f64::consts::PI / beta,
        }
    }
}

/// Parameters for one random instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Point density (points per unit area); zero yields an empty graph.
    pub lambda: f64,
    pub width: f64,
    pub height: f64,
    pub model: ConnectionModel,
    /// Lattice cell side `a`; region sides must be multiples of it.
    pub cell_size: f64,
    /// Probability of keeping a sampled connection.
    pub edge_density: f64,
    pub colors: usize,
    /// Bernoulli parameter for the {0,1} color weights.
    pub weight_prob: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and nonnegative, got {}",
                self.lambda
            )));
        }
        grid_dims(self.width, self.height, self.cell_size)?;
        for (name, p) in [
            ("edge_density", self.edge_density),
            ("weight_prob", self.weight_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        if self.colors == 0 {
            return Err(Error::InvalidParameter("need at least one color".into()));
        }
        self.model.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

/// Points in the plane with sampled conflict edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialGraph {
    points: Vec<Point>,
    edges: Vec<(usize, usize)>,
    config: GeneratorConfig,
}

impl SpatialGraph {
    /// Assembles a graph from explicit coordinates and edges, enforcing the
    /// structural invariants (ids 0..n, no self-loops, endpoints in range,
    /// coordinates inside the region).
    pub fn from_parts(
        config: GeneratorConfig,
        coords: Vec<(f64, f64)>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        config.validate()?;
        let points: Vec<Point> = coords
            .into_iter()
            .enumerate()
            .map(|(id, (x, y))| Point { id, x, y })
            .collect();
        for p in &points {
            if !(0.0..=config.width).contains(&p.x) || !(0.0..=config.height).contains(&p.y) {
                return Err(Error::MalformedData(format!(
                    "point {} at ({}, {}) lies outside the region",
                    p.id, p.x, p.y
                )));
            }
        }
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::MalformedData(format!("self-loop at point {u}")));
            }
            if u >= points.len() || v >= points.len() {
                return Err(Error::MalformedData(format!(
                    "edge ({u},{v}) out of range for {} points",
                    points.len()
                )));
            }
        }
        Ok(SpatialGraph {
            points,
            edges,
            config,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn config(&self) -> &GeneratorConfig {
        &self.config
    }

    pub fn region(&self) -> (f64, f64) {
        (self.config.width, self.config.height)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spatial graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpatialGraph =
            serde_json::from_str(text).map_err(|e| Error::MalformedData(e.to_string()))?;
        // Re-run the structural checks on untrusted input.
        for (idx, p) in raw.points.iter().enumerate() {
            if p.id != idx {
                return Err(Error::MalformedData(format!(
                    "point ids must be consecutive from 0, found {} at position {idx}",
                    p.id
                )));
            }
        }
        let coords = raw.points.iter().map(|p| (p.x, p.y)).collect();
        SpatialGraph::from_parts(raw.config, coords, raw.edges)
    }
}

/// Samples an instance: Poisson point count, uniform positions, independent
/// pair connections with probability `g(x_i - x_j) * edge_density`. The result
/// is fully determined by `config.seed`.
pub fn generate(config: &GeneratorConfig) -> Result<SpatialGraph> {
    config.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed::derive(config.seed, Stage::Generate, 0));

    let mean = config.lambda * config.width * config.height;
    let count = if mean > 0.0 {
        let poisson = Poisson::new(mean)
            .map_err(|e| Error::InvalidParameter(format!("invalid Poisson mean {mean}: {e}")))?;
        poisson.sample(&mut rng) as usize
    } else {
        0
    };

    let points: Vec<Point> = (0..count)
        .map(|id| Point {
            id,
            x: rng.random::<f64>() * config.width,
            y: rng.random::<f64>() * config.height,
        })
        .collect();

    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let dx = points[i].x - points[j].x;
            let dy = points[i].y - points[j].y;
            let p = config.model.prob_at_dist2(dx * dx + dy * dy);
            if p <= 0.0 {
                continue;
            }
            if p < 1.0 && rng.random::<f64>() >= p {
                continue;
            }
            if config.edge_density < 1.0 && rng.random::<f64>() >= config.edge_density {
                continue;
            }
            edges.push((i, j));
        }
    }

    Ok(SpatialGraph {
        points,
        edges,
        config: config.clone(),
    })
}

/// Expected-loss bound `(lambda/2) * integral of g over Omega`, with
/// `Omega = { |x1| > a or |x2| > a }`: closed form for the boolean model
/// (disk minus disk-square intersection), adaptive quadrature otherwise
/// (relative error <= 1e-6, integrand truncated where g < 1e-12).
pub fn excluded_edge_bound(lambda: f64, model: &ConnectionModel, a: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "lambda must be finite and nonnegative, got {lambda}"
        )));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cell size must be positive, got {a}"
        )));
    }
    model.validate()?;
    let integral = match *model {
        ConnectionModel::Boolean { radius } => {
            let reach = 2.0 * radius;
            let disk = std::f64::consts::PI * reach * reach;
            (disk - disk_square_intersection(reach, a)).max(0.0)
        }
        ConnectionModel::RadialExponential { beta } => {
            // Truncate where exp(-beta |x|^2) < 1e-12.
            let cutoff = (12.0 * std::f64::consts::LN_10 / beta).sqrt();
            if cutoff <= a {
                0.0
            } else {
                let g = |x: f64, y: f64| (-beta * (x * x + y * y)).exp();
                let scale = std::f64::consts::PI / beta;
                let tol = scale * 1e-9;
                // Omega within the cutoff box decomposes into two side strips
                // and two top/bottom strips of the central column; g is radial,
                // so each symmetric pair contributes twice one integral.
                let side = integrate::integrate_2d(g, a, cutoff, -cutoff, cutoff, tol);
                let cap = integrate::integrate_2d(g, -a, a, a, cutoff, tol);
                2.0 * side + 2.0 * cap
            }
        }
    };
    Ok(0.5 * lambda * integral)
}

/// Area of the intersection of a radius-`r` disk and the square `[-a, a]^2`,
/// both centered at the origin.
fn disk_square_intersection(r: f64, a: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    if r <= a {
        return std::f64::consts::PI * r * r;
    }
    if r * r >= 2.0 * a * a {
        return 4.0 * a * a;
    }
    // Four disjoint circular segments stick out past the sides.
    let segment = r * r * (a / r).acos() - a * (r * r - a * a).sqrt();
    std::f64::consts::PI * r * r - 4.0 * segment
}

/// Mean of (edges joining non-adjacent cells) / (point count) over `trials`
/// freshly sampled instances drawn from `graph`'s own configuration with the
/// lattice side set to `a`. Instances without points contribute 0.
pub fn measure_excluded_edge_rate(graph: &SpatialGraph, a: f64, trials: usize) -> Result<f64> {
    let config = graph.config();
    let (rows, cols) = grid_dims(config.width, config.height, a)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let mut total = 0.0;
    for k in 0..trials {
        let mut cfg = config.clone();
        cfg.cell_size = a;
        cfg.seed = seed::derive(config.seed, Stage::ExcludedEdgeTrial, k as u64);
        let inst = generate(&cfg)?;
        total += excluded_edge_rate(&inst, a, rows, cols);
    }
    Ok(total / trials as f64)
}

fn excluded_edge_rate(inst: &SpatialGraph, a: f64, rows: usize, cols: usize) -> f64 {
    if inst.points().is_empty() {
        return 0.0;
    }
    let cell = |x: f64, y: f64| -> (isize, isize) {
        let n = ((x / a).floor() as isize + 1).clamp(1, cols as isize);
        let m = ((y / a).floor() as isize + 1).clamp(1, rows as isize);
        (m, n)
    };
    let cells: Vec<(isize, isize)> = inst.points().iter().map(|p| cell(p.x, p.y)).collect();
    let excluded = inst
        .edges()
        .iter()
        .filter(|&&(u, v)| {
            let (m1, n1) = cells[u];
            let (m2, n2) = cells[v];
            (m1 - m2).abs() > 1 || (n1 - n2).abs() > 1
        })
        .count();
    excluded as f64 / inst.points().len() as f64
}

/// Independent Bernoulli(p_f) color weights in {0, 1}, deterministic in the
/// seed. Entry for vertex `v`, color `c` sits at `v * colors + (c-1)`.
pub fn sample_color_weights(
    vertex_count: usize,
    colors: usize,
    weight_prob: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&weight_prob) {
        return Err(Error::InvalidParameter(format!(
            "weight probability must lie in [0, 1], got {weight_prob}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok((0..vertex_count * colors)
        .map(|_| {
            if weight_prob >= 1.0 || rng.random::<f64>() < weight_prob {
                1.0
            } else {
                0.0
            }
        })
        .collect())
}
