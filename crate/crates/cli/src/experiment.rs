//! Seeded parameter sweeps with order-stable CSV output.
//!
//! A sweep point is (axis value, seed index, algorithm). Every point derives
//! its instance seed from the root seed and its (value, seed) indices, so
//! results do not depend on scheduling; rows come out sorted by those indices
//! rather than completion time.

use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use mgc_core::seed::{self, Stage};
use mgc_core::solver::SolveConfig;

use crate::files;
use crate::instance::{build_instance, run_algorithm, Algorithm, InstanceParams};

/// Swept parameter. `Pf` scales the effective vertex density `V_d * p_f`
/// at fixed geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    N,
    L,
    EdgeDensity,
    Pf,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::N => "N",
            Axis::L => "L",
            Axis::EdgeDensity => "Ed",
            Axis::Pf => "pf",
        }
    }
}

impl FromStr for Axis {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" | "n" => Ok(Axis::N),
            "L" | "l" => Ok(Axis::L),
            "Ed" | "ed" | "edge-density" => Ok(Axis::EdgeDensity),
            "pf" | "Pf" | "weight-prob" => Ok(Axis::Pf),
            other => bail!("unknown sweep axis {other:?} (expected N, L, Ed or pf)"),
        }
    }
}

/// One experiment: an axis with strictly increasing values, fixed base
/// parameters, seeds per point and the algorithms to run.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
    pub base: InstanceParams,
    pub floor_height: usize,
    pub seeds: usize,
    pub algorithms: Vec<Algorithm>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            bail!("sweep needs at least one axis value");
        }
        if !self.values.windows(2).all(|w| w[0] < w[1]) {
            bail!("axis values must be strictly increasing");
        }
        if self.seeds == 0 {
            bail!("need at least one seed per point");
        }
        if self.algorithms.is_empty() {
            bail!("need at least one algorithm");
        }
        for &v in &self.values {
            match self.axis {
                Axis::N => {
                    if v < 1.0 || v.fract() != 0.0 {
                        bail!("N values must be positive integers, got {v}");
                    }
                }
                Axis::L => {
                    if v < 2.0 || v.fract() != 0.0 {
                        bail!("L values must be integers >= 2, got {v}");
                    }
                }
                Axis::EdgeDensity | Axis::Pf => {
                    if !(0.0..=1.0).contains(&v) {
                        bail!("{} values must lie in [0, 1], got {v}", self.axis.name());
                    }
                }
            }
        }
        Ok(())
    }

    fn point_params(&self, value: f64, instance_seed: u64) -> (InstanceParams, usize) {
        let mut params = self.base.clone();
        params.seed = instance_seed;
        let mut floor_height = self.floor_height;
        match self.axis {
            Axis::N => params.n = value as usize,
            Axis::L => floor_height = value as usize,
            Axis::EdgeDensity => params.edge_density = value,
            Axis::Pf => params.weight_prob = value,
        }
        (params, floor_height)
    }
}

/// One CSV row; `seed` is the derived instance seed, sufficient on its own to
/// regenerate the instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub radius: f64,
    pub cell_size: f64,
    pub edge_density: f64,
    pub weight_prob: f64,
    pub colors: usize,
    pub floor_height: usize,
    pub algorithm: String,
    pub seed: u64,
    pub fbar: f64,
    pub guarantee: f64,
    pub wall_ms: f64,
}

pub const CSV_HEADER: [&str; 14] = [
    "M",
    "N",
    "lambda",
    "r",
    "a",
    "Ed",
    "pf",
    "C",
    "L",
    "algorithm",
    "seed",
    "fbar",
    "guarantee",
    "wall_ms",
];

impl ResultRow {
    fn record(&self) -> Vec<String> {
        vec![
            self.m.to_string(),
            self.n.to_string(),
            self.lambda.to_string(),
            self.radius.to_string(),
            self.cell_size.to_string(),
            self.edge_density.to_string(),
            self.weight_prob.to_string(),
            self.colors.to_string(),
            self.floor_height.to_string(),
            self.algorithm.clone(),
            self.seed.to_string(),
            self.fbar.to_string(),
            self.guarantee.to_string(),
            self.wall_ms.to_string(),
        ]
    }

    fn parse(record: &csv::StringRecord) -> Result<Self> {
        anyhow::ensure!(record.len() == CSV_HEADER.len(), "row has wrong width");
        let field = |i: usize| record.get(i).unwrap();
        Ok(ResultRow {
            m: field(0).parse()?,
            n: field(1).parse()?,
            lambda: field(2).parse()?,
            radius: field(3).parse()?,
            cell_size: field(4).parse()?,
            edge_density: field(5).parse()?,
            weight_prob: field(6).parse()?,
            colors: field(7).parse()?,
            floor_height: field(8).parse()?,
            algorithm: field(9).to_string(),
            seed: field(10).parse()?,
            fbar: field(11).parse()?,
            guarantee: field(12).parse()?,
            wall_ms: field(13).parse()?,
        })
    }
}

/// Runs the sweep, points in parallel, and returns rows ordered by
/// (value index, seed index, algorithm index). With `save_dir` set, each
/// run's spatial graph and coloring are persisted under
/// `{algorithm}_{axis}{value}_s{seed}`.
pub fn run_sweep(spec: &ExperimentSpec, save_dir: Option<&Path>) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let points: Vec<(usize, usize)> = (0..spec.values.len())
        .flat_map(|vi| (0..spec.seeds).map(move |si| (vi, si)))
        .collect();

    let rows: Vec<Result<Vec<ResultRow>>> = points
        .par_iter()
        .map(|&(vi, si)| {
            let value = spec.values[vi];
            let instance_seed = seed::derive(
                spec.base.seed,
                Stage::SweepRun,
                (vi * spec.seeds + si) as u64,
            );
            let (params, floor_height) = spec.point_params(value, instance_seed);
            let instance = build_instance(&params)?;
            let cfg = SolveConfig::floor(floor_height);
            let mut out = Vec::with_capacity(spec.algorithms.len());
            for &algorithm in &spec.algorithms {
                let run = run_algorithm(&instance, algorithm, &cfg)?;
                if let Some(dir) = save_dir {
                    let prefix = dir.join(format!(
                        "{}_{}{}_s{}",
                        algorithm.name(),
                        spec.axis.name(),
                        value,
                        instance_seed
                    ));
                    files::save_instance(&prefix, &instance)?;
                    files::save_coloring(&prefix, &instance.build.graph, &run.coloring)?;
                }
                out.push(ResultRow {
                    m: params.m,
                    n: params.n,
                    lambda: params.lambda,
                    radius: params.radius,
                    cell_size: params.cell_size,
                    edge_density: params.edge_density,
                    weight_prob: params.weight_prob,
                    colors: params.colors,
                    floor_height,
                    algorithm: algorithm.name().to_string(),
                    seed: instance_seed,
                    fbar: run.fbar,
                    guarantee: run.guarantee,
                    wall_ms: run.wall.as_secs_f64() * 1e3,
                });
            }
            Ok(out)
        })
        .collect();

    let mut flat = Vec::with_capacity(points.len() * spec.algorithms.len());
    for group in rows {
        flat.extend(group?);
    }
    Ok(flat)
}

pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut writer =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let header = reader.headers()?.clone();
    anyhow::ensure!(
        header.iter().eq(CSV_HEADER.iter().copied()),
        "unexpected CSV header {header:?}"
    );
    let mut rows = Vec::new();
    for record in reader.records() {
        rows.push(ResultRow::parse(&record?)?);
    }
    Ok(rows)
}

/// Parses `--values`: either a comma list (`5,10,20`) or an inclusive integer
/// range (`1..40`).
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: i64 = lo.trim().parse().context("range start")?;
        let hi: i64 = hi.trim().parse().context("range end")?;
        anyhow::ensure!(lo <= hi, "empty range {text:?}");
        return Ok((lo..=hi).map(|v| v as f64).collect());
    }
    text.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(Into::into))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_value_lists_and_ranges() {
        assert_eq!(parse_values("5,10,20").unwrap(), vec![5.0, 10.0, 20.0]);
        assert_eq!(parse_values("1..4").unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert!(parse_values("4..1").is_err());
        assert!(parse_values("a,b").is_err());
    }

    #[test]
    fn sweep_rows_do_not_depend_on_worker_count() {
        let spec = ExperimentSpec {
            axis: Axis::N,
            values: vec![2.0, 3.0],
            base: InstanceParams {
                m: 3,
                n: 2,
                lambda: 1.2,
                radius: 0.5,
                cell_size: 1.0,
                edge_density: 0.7,
                weight_prob: 1.0,
                colors: 3,
                seed: 99,
            },
            floor_height: 2,
            seeds: 3,
            algorithms: vec![Algorithm::Mgc, Algorithm::Greedy],
        };
        let run_with = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_sweep(&spec, None).unwrap())
        };
        let serial = run_with(1);
        let parallel = run_with(4);
        let strip = |rows: &[ResultRow]| -> Vec<ResultRow> {
            rows.iter()
                .map(|r| ResultRow {
                    wall_ms: 0.0,
                    ..r.clone()
                })
                .collect()
        };
        assert_eq!(strip(&serial), strip(&parallel));
    }

    #[test]
    fn validation_catches_bad_specs() {
        let base = InstanceParams {
            m: 4,
            n: 5,
            lambda: 1.0,
            radius: 0.5,
            cell_size: 1.0,
            edge_density: 0.6,
            weight_prob: 1.0,
            colors: 3,
            seed: 1,
        };
        let mut spec = ExperimentSpec {
            axis: Axis::N,
            values: vec![5.0, 10.0],
            base,
            floor_height: 2,
            seeds: 2,
            algorithms: vec![Algorithm::Mgc],
        };
        assert!(spec.validate().is_ok());
        spec.values = vec![10.0, 5.0];
        assert!(spec.validate().is_err());
        spec.values = vec![5.0, 10.0];
        spec.seeds = 0;
        assert!(spec.validate().is_err());
    }
}
