//! Cyclic floor-division scheme over the rows of an M-row matrix graph.
//!
//! A division cuts the row set {1..M} into Q = ceil(M/L) floors of at most L
//! rows; inside each floor one row may be designated *marginal*. Deleting the
//! marginal rows makes the floors pairwise non-adjacent, so each floor can be
//! solved as an independent one-dimensional problem. The scheme holds L
//! cyclically shifted divisions arranged so that every row is marginal in
//! exactly one of them - the counting property behind the solver's (L-1)/L
//! guarantee.
//!
//! Shifts are modular on row labels only; rows M and 1 are never treated as
//! graph-adjacent. A floor pushed past row M wraps into two segments (e.g.
//! {10, 1}), which later stacks into a vector graph with two disconnected
//! layers.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Floor {
    /// Ordered rows; a wrapped floor lists its high segment first.
    pub rows: Vec<usize>,
    pub marginal: Option<usize>,
}

impl Floor {
    pub fn non_marginal_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .copied()
            .filter(|&r| Some(r) != self.marginal)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Division {
    pub floors: Vec<Floor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FloorDivisionScheme {
    /// Row count M.
    pub rows: usize,
    /// Floor height L.
    pub floor_height: usize,
    /// Q = ceil(M / L).
    pub quotient: usize,
    /// r = M - L(Q-1), in (0, L].
    pub remainder: usize,
    /// L divisions, index t = 0..L-1.
    pub divisions: Vec<Division>,
}

impl FloorDivisionScheme {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scheme serializes")
    }
}

/// Builds the L-division scheme for M rows and floor height L, 2 <= L < M.
///
/// Division 0 slices {1..M} into Q consecutive floors with each floor's first
/// row marginal. Divisions 1..r-1 shift everything cyclically by t. From t = r
/// on, the last floor would shrink past its marginal row, so the construction
/// re-anchors: floors 1..Q-2 keep the shifted pattern, floor Q-1 absorbs the
/// tail up to row M, and floor Q takes rows {1..t} with no marginal row.
pub fn build_scheme(rows: usize, floor_height: usize) -> Result<FloorDivisionScheme> {
    let (m, l) = (rows, floor_height);
    if l < 2 || l >= m {
        return Err(Error::InvalidFloorHeight {
            given: l,
            max: m.saturating_sub(1),
            rows: m,
        });
    }
    let q = m.div_ceil(l);
    let r = m - l * (q - 1);

    let mut divisions = Vec::with_capacity(l);
    for t in 0..l {
        let mut floors = Vec::with_capacity(q);
        if t < r {
            // Pure cyclic shift of division 0 by t.
            for j in 1..q {
                let first = t + l * (j - 1) + 1;
                floors.push(Floor {
                    rows: (first..first + l).collect(),
                    marginal: Some(first),
                });
            }
            // Last floor has r rows and may wrap past M.
            let first = t + l * (q - 1) + 1;
            let rows_wrapped: Vec<usize> = (first..first + r)
                .map(|x| if x > m { x - m } else { x })
                .collect();
            floors.push(Floor {
                rows: rows_wrapped,
                marginal: Some(first),
            });
        } else {
            for j in 1..q.saturating_sub(1) {
                let first = t + l * (j - 1) + 1;
                floors.push(Floor {
                    rows: (first..first + l).collect(),
                    marginal: Some(first),
                });
            }
            // Floor Q-1 runs to row M; floor Q restarts at row 1, no marginal.
            let first = t + l * (q - 2) + 1;
            floors.push(Floor {
                rows: (first..=m).collect(),
                marginal: Some(first),
            });
            floors.push(Floor {
                rows: (1..=t).collect(),
                marginal: None,
            });
        }
        divisions.push(Division { floors });
    }
    Ok(FloorDivisionScheme {
        rows: m,
        floor_height: l,
        quotient: q,
        remainder: r,
        divisions,
    })
}

/// Outcome of [`verify_scheme`]: all violations found, in check order.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub violations: Vec<String>,
}

impl VerifyReport {
    pub fn first_violation(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }
}

/// Checks the scheme invariants under the row adjacency |m - m'| = 1:
/// every division partitions {1..M}; floors hold at most L rows and at most
/// one marginal row (which must belong to the floor); every row is marginal
/// exactly once and non-marginal exactly L-1 times across divisions; and in
/// each division any edge-adjacent row pair split across floors includes a
/// marginal row (equivalently: after deleting marginal rows, distinct floors
/// are non-adjacent).
pub fn verify_scheme(scheme: &FloorDivisionScheme) -> VerifyReport {
    let m = scheme.rows;
    let l = scheme.floor_height;
    let mut violations = Vec::new();

    if scheme.divisions.len() != l {
        violations.push(format!(
            "scheme holds {} divisions, expected L = {l}",
            scheme.divisions.len()
        ));
    }

    let mut marginal_count = vec![0usize; m + 1];
    let mut non_marginal_count = vec![0usize; m + 1];

    for (t, division) in scheme.divisions.iter().enumerate() {
        let mut seen = vec![false; m + 1];
        let mut floor_of = vec![usize::MAX; m + 1];
        for (j, floor) in division.floors.iter().enumerate() {
            if floor.rows.len() > l {
                violations.push(format!(
                    "division {t} floor {j} holds {} rows, above L = {l}",
                    floor.rows.len()
                ));
            }
            if let Some(mr) = floor.marginal {
                if !floor.rows.contains(&mr) {
                    violations.push(format!(
                        "division {t} floor {j}: marginal row {mr} not in the floor"
                    ));
                } else {
                    marginal_count[mr] += 1;
                }
            }
            for &row in &floor.rows {
                if row < 1 || row > m {
                    violations.push(format!("division {t} floor {j}: row {row} out of range"));
                    continue;
                }
                if seen[row] {
                    violations.push(format!("division {t}: row {row} appears in two floors"));
                }
                seen[row] = true;
                floor_of[row] = j;
                if Some(row) != floor.marginal {
                    non_marginal_count[row] += 1;
                }
            }
        }
        for row in 1..=m {
            if !seen[row] {
                violations.push(format!("division {t}: row {row} missing"));
            }
        }
        // Edge-adjacent rows in different floors must include a marginal row.
        for row in 1..m {
            let (a, b) = (row, row + 1);
            if floor_of[a] != floor_of[b] && floor_of[a] != usize::MAX && floor_of[b] != usize::MAX
            {
                let is_marginal = |r: usize| {
                    division
                        .floors
                        .get(floor_of[r])
                        .map(|f| f.marginal == Some(r))
                        .unwrap_or(false)
                };
                if !is_marginal(a) && !is_marginal(b) {
                    violations.push(format!(
                        "division {t}: adjacent rows {a},{b} split across floors with no marginal"
                    ));
                }
            }
        }
    }

    for row in 1..=m {
        if marginal_count[row] != 1 {
            violations.push(format!(
                "row {row} is marginal in {} divisions, expected 1",
                marginal_count[row]
            ));
        }
        if non_marginal_count[row] != l.saturating_sub(1) {
            violations.push(format!(
                "row {row} is non-marginal in {} divisions, expected L-1 = {}",
                non_marginal_count[row],
                l - 1
            ));
        }
    }

    VerifyReport {
        pass: violations.is_empty(),
        violations,
    }
}
