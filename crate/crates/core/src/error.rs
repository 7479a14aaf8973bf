//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Region side is not an integer multiple of the cell size.
    #[error("region {width} x {height} does not divide into cells of size {cell_size}")]
    RegionMismatch {
        width: f64,
        height: f64,
        cell_size: f64,
    },

    /// A (possibly stacked) cell exceeds the independent-set catalog cap.
    #[error("cell holds {size} vertices, above the catalog cap of {cap}")]
    CellTooLarge { size: usize, cap: usize },

    /// Floor height outside the valid range for floor division.
    #[error("floor height {given} outside [2, {max}] for {rows} rows")]
    InvalidFloorHeight {
        given: usize,
        max: usize,
        rows: usize,
    },

    /// Row subset handed to the stacker joins non-adjacent columns.
    #[error("row subset violates vector-graph locality: {0}")]
    LocalityViolation(String),

    /// Every admissible state at some cell is infeasible.
    #[error("no feasible independent-set state at cell {cell}")]
    Infeasible { cell: usize },

    /// Instance too large for the requested exact method.
    #[error("instance too large for exact solving: {0}")]
    TooLargeForExact(String),

    #[error("malformed instance data: {0}")]
    MalformedData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
