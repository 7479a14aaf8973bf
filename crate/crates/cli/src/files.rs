//! On-disk artifact bundle. A prefix `P` expands to:
//!
//! * `P.spatial.json` - points, edges, generation config
//! * `P.matrix.json`  - lattice graph (cell counts plus `[m,n,i]` edges)
//! * `P.weights.json` - `{"w": [...], "mu": [[per-color row per vertex]]}`
//! * `P.coloring.json` - sparse `[m, n, i, c]` quadruples
//! * `P.report.json`  - solve trace
//!
//! Vertex order in the weight arrays is the flat order: cells row-major,
//! within-cell index ascending.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use mgc_core::geometry::SpatialGraph;
use mgc_core::matrix_graph::{Coloring, MatrixGraph, WeightAssignment};
use mgc_core::solver::SolveReport;

use crate::instance::{build_instance_from_spatial, Instance};

pub fn spatial_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, "spatial.json")
}

pub fn matrix_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, "matrix.json")
}

pub fn weights_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, "weights.json")
}

pub fn coloring_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, "coloring.json")
}

pub fn report_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, "report.json")
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(suffix);
    prefix.with_file_name(name)
}

#[derive(Serialize, Deserialize)]
struct WeightsFile {
    w: Vec<f64>,
    mu: Vec<Vec<f64>>,
}

/// Writes the full instance bundle (spatial, matrix, weights).
pub fn save_instance(prefix: &Path, instance: &Instance) -> Result<()> {
    write(&spatial_path(prefix), instance.spatial.to_json())?;
    write(&matrix_path(prefix), instance.build.graph.to_json())?;
    let colors = instance.colors();
    let weights = WeightsFile {
        w: instance.weights.w_slice().to_vec(),
        mu: (0..instance.weights.vertex_count())
            .map(|v| (1..=colors).map(|c| instance.weights.mu(v, c)).collect())
            .collect(),
    };
    write(
        &weights_path(prefix),
        serde_json::to_string_pretty(&weights)?,
    )?;
    Ok(())
}

/// Loads the spatial file under the prefix and re-derives the rest of the
/// instance from it.
pub fn load_instance(prefix: &Path) -> Result<Instance> {
    let path = spatial_path(prefix);
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let spatial = SpatialGraph::from_json(&text)?;
    build_instance_from_spatial(spatial)
}

pub fn save_coloring(prefix: &Path, graph: &MatrixGraph, coloring: &Coloring) -> Result<()> {
    write(&coloring_path(prefix), coloring.to_json(graph))
}

pub fn load_coloring(path: &Path, graph: &MatrixGraph, colors: usize) -> Result<Coloring> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Coloring::from_json(graph, colors, &text)?)
}

pub fn save_report(prefix: &Path, report: &SolveReport) -> Result<()> {
    write(&report_path(prefix), report.to_json())
}

#[derive(Deserialize)]
pub struct StoredReport {
    pub floor_height: usize,
    pub exact_mode: bool,
    pub guarantee: f64,
    pub fbar: f64,
}

pub fn load_report(path: &Path) -> Result<StoredReport> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

/// Loads the weight file back into a [`WeightAssignment`].
pub fn load_weights(path: &Path) -> Result<WeightAssignment> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: WeightsFile = serde_json::from_str(&text)?;
    let colors = file.mu.first().map(Vec::len).unwrap_or(1).max(1);
    let mut flat = Vec::with_capacity(file.w.len() * colors);
    for row in &file.mu {
        anyhow::ensure!(row.len() == colors, "ragged mu table");
        flat.extend_from_slice(row);
    }
    Ok(WeightAssignment::new(file.w, flat, colors)?)
}

fn write(path: &Path, contents: String) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
