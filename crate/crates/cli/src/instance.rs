//! Instance pipeline: parameters -> spatial graph -> matrix graph -> weights,
//! plus the algorithm dispatcher used by solve/compare/sweep.

use std::time::{Duration, Instant};

use anyhow::Result;
use clap::ValueEnum;

use mgc_core::geometry::{self, ConnectionModel, GeneratorConfig, SpatialGraph};
use mgc_core::matrix_graph::{self, reuse_ratio, Coloring, SpatialBuild, WeightAssignment};
use mgc_core::seed::{self, Stage};
use mgc_core::solver::{self, SolveConfig, SolveReport};
use mgc_core::{baselines, oracle};

/// Flat parameter set for one generated instance. The region is `n * a` wide
/// and `m * a` tall, the connection model is boolean with the given radius
/// (links conflict within distance `2 * radius`), vertex weights are all one
/// and color weights are Bernoulli(weight_prob) in {0, 1}.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceParams {
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub radius: f64,
    pub cell_size: f64,
    pub edge_density: f64,
    pub weight_prob: f64,
    pub colors: usize,
    pub seed: u64,
}

impl InstanceParams {
    pub fn config(&self) -> GeneratorConfig {
        GeneratorConfig {
            lambda: self.lambda,
            width: self.n as f64 * self.cell_size,
            height: self.m as f64 * self.cell_size,
            model: ConnectionModel::Boolean {
                radius: self.radius,
            },
            cell_size: self.cell_size,
            edge_density: self.edge_density,
            colors: self.colors,
            weight_prob: self.weight_prob,
            seed: self.seed,
        }
    }
}

/// A fully materialized instance: the spatial graph it came from, the lattice
/// build (graph, dropped edges, point map) and the weight tables.
#[derive(Debug, Clone)]
pub struct Instance {
    pub spatial: SpatialGraph,
    pub build: SpatialBuild,
    pub weights: WeightAssignment,
}

impl Instance {
    pub fn colors(&self) -> usize {
        self.weights.colors()
    }
}

pub fn build_instance(params: &InstanceParams) -> Result<Instance> {
    let spatial = geometry::generate(&params.config())?;
    build_instance_from_spatial(spatial)
}

/// Deterministically derives the lattice build and weights from a spatial
/// graph; loading a saved spatial graph therefore reproduces the in-memory
/// pipeline bit for bit.
pub fn build_instance_from_spatial(spatial: SpatialGraph) -> Result<Instance> {
    let cfg = spatial.config().clone();
    let build = matrix_graph::build_from_spatial(&spatial, cfg.cell_size)?;
    let mu = geometry::sample_color_weights(
        build.graph.vertex_count(),
        cfg.colors,
        cfg.weight_prob,
        seed::derive(cfg.seed, Stage::ColorWeights, 0),
    )?;
    let weights = WeightAssignment::new(vec![1.0; build.graph.vertex_count()], mu, cfg.colors)?;
    Ok(Instance {
        spatial,
        build,
        weights,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Floor-division approximation (Algorithm 1).
    Mgc,
    /// Exact per-color solver.
    Exact,
    /// Greedy list-coloring baseline.
    Greedy,
    /// Simplified soft-frequency-reuse baseline.
    Sfr,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mgc => "mgc",
            Algorithm::Exact => "exact",
            Algorithm::Greedy => "greedy",
            Algorithm::Sfr => "sfr",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "mgc" => Ok(Algorithm::Mgc),
            "exact" => Ok(Algorithm::Exact),
            "greedy" => Ok(Algorithm::Greedy),
            "sfr" => Ok(Algorithm::Sfr),
            other => anyhow::bail!("unknown algorithm {other:?}"),
        }
    }
}

/// Result of running one algorithm on one instance. `wall` covers the solve
/// only, never instance generation.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub algorithm: Algorithm,
    pub coloring: Coloring,
    pub fbar: f64,
    /// (L-1)/L for the approximation, 1 for exact, 0 for the heuristics.
    pub guarantee: f64,
    pub wall: Duration,
    pub report: Option<SolveReport>,
}

pub fn run_algorithm(
    instance: &Instance,
    algorithm: Algorithm,
    cfg: &SolveConfig,
) -> Result<RunOutcome> {
    let graph = &instance.build.graph;
    let weights = &instance.weights;
    let start = Instant::now();
    let (coloring, fbar, guarantee, report) = match algorithm {
        Algorithm::Mgc => {
            let (coloring, report) = solver::solve_mgc(graph, weights, cfg)?;
            (coloring, report.fbar, report.guarantee, Some(report))
        }
        Algorithm::Exact => {
            let exact = oracle::exact_mgc(graph, weights)?;
            (exact.coloring, exact.fbar, 1.0, None)
        }
        Algorithm::Greedy => {
            let coloring = baselines::greedy_list_coloring(graph, weights);
            let fbar = reuse_ratio(&coloring, weights);
            (coloring, fbar, 0.0, None)
        }
        Algorithm::Sfr => {
            let coloring = baselines::simplified_sfr(graph, weights)?;
            let fbar = reuse_ratio(&coloring, weights);
            (coloring, fbar, 0.0, None)
        }
    };
    let wall = start.elapsed();
    Ok(RunOutcome {
        algorithm,
        coloring,
        fbar,
        guarantee,
        wall,
        report,
    })
}
