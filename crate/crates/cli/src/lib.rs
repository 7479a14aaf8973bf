//! Library half of the `mgc` command-line tool: instance pipeline, artifact
//! files and the sweep engine. The binary in `main.rs` is a thin clap layer
//! over these modules; integration and acceptance suites drive them directly.

pub mod experiment;
pub mod files;
pub mod instance;

pub use experiment::{run_sweep, Axis, ExperimentSpec, ResultRow};
pub use instance::{build_instance, run_algorithm, Algorithm, Instance, InstanceParams};
