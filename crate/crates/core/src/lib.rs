//! Frequency-reuse allocation on matrix conflict graphs.
//!
//! A matrix graph is an M-by-N lattice of small vertex sets ("cells") in which
//! edges exist only inside a cell or between cells adjacent in the
//! 8-neighborhood. The crate provides the full pipeline for studying how much
//! frequency can be reused on such graphs:
//!
//! * [`geometry`] - random conflict-graph instances from a Poisson point
//!   process with a radial connection function, plus the analytic bound on
//!   edges lost when the instance is snapped onto the lattice.
//! * [`matrix_graph`] - the lattice data model, construction from spatial
//!   graphs, multi-colorings and the weighted reuse-ratio metrics.
//! * [`vector_dp`] - exact maximum-weight independent sets on one-dimensional
//!   (vector) graphs by dynamic programming over per-cell independent-set
//!   catalogs, with optional per-cell constraint sets.
//! * [`floor_division`] - the cyclic row-division scheme that cuts an M-row
//!   graph into height-bounded floors, each row sacrificial ("marginal") in
//!   exactly one division.
//! * [`solver`] - the approximate multi-coloring solver with the (L-1)/L
//!   guarantee: per color, solve every floor exactly, stuff the marginal rows
//!   under induced constraints, keep the best division.
//! * [`oracle`] - exact solvers for desk-scale instances, the ground truth
//!   for every approximation test.
//! * [`baselines`] - greedy list-coloring and a simplified soft-frequency-reuse
//!   heuristic for comparison runs.
//! * [`synth`] - seeded random instance builders for verification suites.

pub mod baselines;
pub mod error;
pub mod floor_division;
pub mod geometry;
mod integrate;
pub mod matrix_graph;
pub mod oracle;
pub mod seed;
pub mod solver;
pub mod synth;
pub mod vector_dp;

pub use error::{Error, Result};
pub use floor_division::FloorDivisionScheme;
pub use geometry::{ConnectionModel, GeneratorConfig, SpatialGraph};
pub use matrix_graph::{Coloring, DroppedEdgeList, MatrixGraph, VertexRef, WeightAssignment};
pub use solver::{SolveConfig, SolveReport};
pub use vector_dp::VectorGraph;
