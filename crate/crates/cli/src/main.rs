//! `mgc` - generate matrix-graph instances, color them, and sweep experiments.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use mgc_cli::experiment::{self, Axis, ExperimentSpec};
use mgc_cli::files;
use mgc_cli::instance::{
    build_instance, run_algorithm, Algorithm, Instance, InstanceParams, RunOutcome,
};
use mgc_core::floor_division;
use mgc_core::matrix_graph::{is_proper, reuse_ratio, validity_check};
use mgc_core::oracle;
use mgc_core::solver::SolveConfig;
use mgc_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "mgc",
    about = "Frequency-reuse allocation on matrix conflict graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Lattice rows M.
    #[arg(long, default_value_t = 10)]
    m: usize,
    /// Lattice columns N.
    #[arg(long, default_value_t = 50)]
    n: usize,
    /// Poisson point density (points per unit area).
    #[arg(long, default_value_t = 1.6)]
    lambda: f64,
    /// Boolean connection radius r; links conflict within distance 2r.
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
    /// Lattice cell side a.
    #[arg(long = "cell-size", default_value_t = 1.0)]
    cell_size: f64,
    /// Probability of keeping each sampled conflict edge.
    #[arg(long = "edge-density", default_value_t = 0.6)]
    edge_density: f64,
    /// Probability that a color weight is 1 rather than 0.
    #[arg(long = "pf", default_value_t = 1.0)]
    weight_prob: f64,
    /// Color pool size C.
    #[arg(long, default_value_t = 6)]
    colors: usize,
    /// Root seed; all stage seeds derive from it.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl InstanceArgs {
    fn params(&self) -> InstanceParams {
        InstanceParams {
            m: self.m,
            n: self.n,
            lambda: self.lambda,
            radius: self.radius,
            cell_size: self.cell_size,
            edge_density: self.edge_density,
            weight_prob: self.weight_prob,
            colors: self.colors,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random instance and write its file bundle.
    Generate {
        #[command(flatten)]
        params: InstanceArgs,
        /// Output prefix; writes PREFIX.{spatial,matrix,weights}.json.
        #[arg(long, default_value = "mgc_run")]
        out: PathBuf,
    },
    /// Run one algorithm and write the coloring and report.
    Solve {
        #[command(flatten)]
        params: InstanceArgs,
        /// Load an existing bundle by prefix instead of generating.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Algorithm::Mgc)]
        algorithm: Algorithm,
        /// Floor height L for the approximation.
        #[arg(long = "floor-height", default_value_t = 3)]
        floor_height: usize,
        /// Solve each color exactly by stacking all rows.
        #[arg(long = "exact-mode")]
        exact_mode: bool,
        #[arg(long, default_value = "mgc_run")]
        out: PathBuf,
    },
    /// Run the exact oracle (small instances only).
    Exact {
        #[command(flatten)]
        params: InstanceArgs,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value = "mgc_run")]
        out: PathBuf,
    },
    /// Run several algorithms on one instance and tabulate the results.
    Compare {
        #[command(flatten)]
        params: InstanceArgs,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Comma list from {mgc, exact, greedy, sfr}.
        #[arg(long, default_value = "mgc,greedy,sfr")]
        algorithms: String,
        #[arg(long = "floor-height", default_value_t = 3)]
        floor_height: usize,
        /// Optional CSV output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one axis over seeded instances and write a CSV.
    Sweep {
        #[command(flatten)]
        params: InstanceArgs,
        /// Axis: N, L, Ed or pf.
        #[arg(long)]
        axis: Axis,
        /// Comma list (5,10,20) or inclusive integer range (1..40).
        #[arg(long)]
        values: String,
        /// Seeds per sweep point.
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// Comma list from {mgc, exact, greedy, sfr}.
        #[arg(long, default_value = "mgc")]
        algorithms: String,
        #[arg(long = "floor-height", default_value_t = 3)]
        floor_height: usize,
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
        /// Persist each run's instance and coloring under this directory.
        #[arg(long = "save-colorings")]
        save_colorings: Option<PathBuf>,
    },
    /// Re-check a solve: properness, metric consistency, floor scheme,
    /// validity on the source graph, and the guarantee against the oracle.
    Verify {
        /// Instance bundle prefix.
        #[arg(long, default_value = "mgc_run")]
        graph: PathBuf,
        /// Coloring file; defaults to PREFIX.coloring.json.
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Report file; defaults to PREFIX.report.json.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { params, out } => {
            let instance = build_instance(&params.params())?;
            files::save_instance(&out, &instance)?;
            println!(
                "generated {} points, {} matrix edges, {} dropped -> {}.*",
                instance.spatial.points().len(),
                instance.build.graph.edges().len(),
                instance.build.dropped.len(),
                out.display()
            );
            Ok(())
        }
        Command::Solve {
            params,
            graph,
            algorithm,
            floor_height,
            exact_mode,
            out,
        } => {
            let instance = obtain_instance(&params, &graph, Some(&out))?;
            let cfg = SolveConfig {
                floor_height,
                exact_mode,
            };
            let run = run_algorithm(&instance, algorithm, &cfg)?;
            write_run(&out, &instance, &run)?;
            println!(
                "{}: fbar = {:.6}, guarantee = {:.4}, {:.2} ms -> {}.*",
                algorithm.name(),
                run.fbar,
                run.guarantee,
                run.wall.as_secs_f64() * 1e3,
                out.display()
            );
            Ok(())
        }
        Command::Exact { params, graph, out } => {
            let instance = obtain_instance(&params, &graph, Some(&out))?;
            let run = run_algorithm(&instance, Algorithm::Exact, &SolveConfig::exact())?;
            write_run(&out, &instance, &run)?;
            println!(
                "exact: fbar_m = {:.6}, {:.2} ms -> {}.*",
                run.fbar,
                run.wall.as_secs_f64() * 1e3,
                out.display()
            );
            Ok(())
        }
        Command::Compare {
            params,
            graph,
            algorithms,
            floor_height,
            out,
        } => {
            let instance = obtain_instance(&params, &graph, None)?;
            let algorithms = parse_algorithms(&algorithms)?;
            let cfg = SolveConfig::floor(floor_height);
            let p = instance_params_of(&params, &instance);
            println!(
                "{:<8} {:>10} {:>10} {:>10}",
                "algo", "fbar", "guarantee", "wall_ms"
            );
            let mut rows = Vec::new();
            for algorithm in algorithms {
                let run = run_algorithm(&instance, algorithm, &cfg)?;
                println!(
                    "{:<8} {:>10.6} {:>10.4} {:>10.2}",
                    algorithm.name(),
                    run.fbar,
                    run.guarantee,
                    run.wall.as_secs_f64() * 1e3
                );
                rows.push(experiment::ResultRow {
                    m: p.m,
                    n: p.n,
                    lambda: p.lambda,
                    radius: p.radius,
                    cell_size: p.cell_size,
                    edge_density: p.edge_density,
                    weight_prob: p.weight_prob,
                    colors: p.colors,
                    floor_height,
                    algorithm: algorithm.name().to_string(),
                    seed: p.seed,
                    fbar: run.fbar,
                    guarantee: run.guarantee,
                    wall_ms: run.wall.as_secs_f64() * 1e3,
                });
            }
            if let Some(path) = out {
                experiment::write_csv(&path, &rows)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Sweep {
            params,
            axis,
            values,
            seeds,
            algorithms,
            floor_height,
            out,
            save_colorings,
        } => {
            let spec = ExperimentSpec {
                axis,
                values: experiment::parse_values(&values)?,
                base: params.params(),
                floor_height,
                seeds,
                algorithms: parse_algorithms(&algorithms)?,
            };
            let rows = experiment::run_sweep(&spec, save_colorings.as_deref())?;
            experiment::write_csv(&out, &rows)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(())
        }
        Command::Verify {
            graph,
            coloring,
            report,
        } => verify(&graph, coloring.as_deref(), report.as_deref()),
    }
}

fn obtain_instance(
    params: &InstanceArgs,
    graph: &Option<PathBuf>,
    persist_to: Option<&PathBuf>,
) -> Result<Instance> {
    match graph {
        Some(prefix) => files::load_instance(prefix),
        None => {
            let instance = build_instance(&params.params())?;
            if let Some(out) = persist_to {
                files::save_instance(out, &instance)?;
            }
            Ok(instance)
        }
    }
}

/// Parameters as actually carried by the instance (the bundle's config wins
/// over command-line defaults when loading from files).
fn instance_params_of(args: &InstanceArgs, instance: &Instance) -> InstanceParams {
    let cfg = instance.spatial.config();
    let radius = match cfg.model {
        mgc_core::geometry::ConnectionModel::Boolean { radius } => radius,
        mgc_core::geometry::ConnectionModel::RadialExponential { .. } => args.radius,
    };
    InstanceParams {
        m: instance.build.graph.rows(),
        n: instance.build.graph.cols(),
        lambda: cfg.lambda,
        radius,
        cell_size: cfg.cell_size,
        edge_density: cfg.edge_density,
        weight_prob: cfg.weight_prob,
        colors: cfg.colors,
        seed: cfg.seed,
    }
}

fn parse_algorithms(text: &str) -> Result<Vec<Algorithm>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Algorithm::parse)
        .collect()
}

fn write_run(out: &std::path::Path, instance: &Instance, run: &RunOutcome) -> Result<()> {
    files::save_coloring(out, &instance.build.graph, &run.coloring)?;
    let mut report = match &run.report {
        Some(solver_report) => serde_json::to_value(solver_report)?,
        None => json!({
            "colors": instance.colors(),
            "floor_height": 0,
            "exact_mode": run.algorithm == Algorithm::Exact,
            "guarantee": run.guarantee,
            "fbar": run.fbar,
        }),
    };
    report["algorithm"] = json!(run.algorithm.name());
    report["wall_ms"] = json!(run.wall.as_secs_f64() * 1e3);
    std::fs::write(
        files::report_path(out),
        serde_json::to_string_pretty(&report)?,
    )
    .with_context(|| format!("writing {}", files::report_path(out).display()))?;
    Ok(())
}

fn verify(
    prefix: &std::path::Path,
    coloring_path: Option<&std::path::Path>,
    report_path: Option<&std::path::Path>,
) -> Result<()> {
    let instance = files::load_instance(prefix)?;
    let graph = &instance.build.graph;
    let default_coloring = files::coloring_path(prefix);
    let default_report = files::report_path(prefix);
    let coloring = files::load_coloring(
        coloring_path.unwrap_or(&default_coloring),
        graph,
        instance.colors(),
    )?;
    let report = files::load_report(report_path.unwrap_or(&default_report))?;

    let mut failures = 0usize;
    let mut check = |name: &str, outcome: std::result::Result<String, String>| match outcome {
        Ok(detail) => println!("check {name}: ok ({detail})"),
        Err(detail) => {
            failures += 1;
            println!("check {name}: FAIL ({detail})");
        }
    };

    let (proper, violations) = is_proper(graph, &coloring);
    check(
        "matrix-properness",
        if proper {
            Ok(format!("{} edges scanned", graph.edges().len()))
        } else {
            Err(format!(
                "{} conflicting (edge, color) pairs",
                violations.len()
            ))
        },
    );

    let fbar = reuse_ratio(&coloring, &instance.weights);
    check(
        "reported-fbar",
        if (fbar - report.fbar).abs() <= 1e-12 {
            Ok(format!("fbar = {fbar:.6}"))
        } else {
            Err(format!("recomputed {fbar} vs reported {}", report.fbar))
        },
    );

    if report.floor_height >= 2 && !report.exact_mode {
        let outcome = match floor_division::build_scheme(graph.rows(), report.floor_height) {
            Ok(scheme) => {
                let r = floor_division::verify_scheme(&scheme);
                if r.pass {
                    Ok(format!(
                        "M = {}, L = {} scheme valid",
                        graph.rows(),
                        report.floor_height
                    ))
                } else {
                    Err(r.first_violation().unwrap_or("invalid").to_string())
                }
            }
            Err(e) => Err(e.to_string()),
        };
        check("floor-scheme", outcome);
    } else {
        println!("check floor-scheme: skipped (no floor division in this run)");
    }

    let validated = validity_check(&coloring, &instance.build.dropped, &instance.weights);
    let spatial_ok = is_proper(graph, &validated).0
        && instance.build.dropped.pairs.iter().all(|&(u, v)| {
            (1..=instance.colors()).all(|c| !(validated.get(u, c) && validated.get(v, c)))
        });
    check(
        "spatial-properness",
        if spatial_ok {
            Ok(format!(
                "{} dropped edges reconciled",
                instance.build.dropped.len()
            ))
        } else {
            Err("validity check left a conflict on the source graph".into())
        },
    );

    match oracle::exact_mgc(graph, &instance.weights) {
        Ok(exact) => {
            let bound = report.guarantee * exact.fbar;
            check(
                "guarantee-certificate",
                if report.fbar + 1e-12 >= bound {
                    Ok(format!(
                        "fbar {:.6} >= {:.4} * fbar_m {:.6}",
                        report.fbar, report.guarantee, exact.fbar
                    ))
                } else {
                    Err(format!(
                        "fbar {} below {} * fbar_m {}",
                        report.fbar, report.guarantee, exact.fbar
                    ))
                },
            );
        }
        Err(CoreError::TooLargeForExact(_)) | Err(CoreError::CellTooLarge { .. }) => {
            println!("check guarantee-certificate: skipped (instance too large for the oracle)");
        }
        Err(e) => return Err(e.into()),
    }

    if failures > 0 {
        bail!("{failures} verification check(s) failed");
    }
    println!("all checks passed");
    Ok(())
}
