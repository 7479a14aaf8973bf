//! Approximate matrix-graph multi-coloring with the (L-1)/L guarantee.
//!
//! Colors decouple (the objective is a per-color sum), so each color class is
//! an independent-set problem under the weights `u = w * mu(., c)`. For one
//! color the solver walks every division of the floor-division scheme:
//!
//! 1. each floor minus its marginal row stacks into a vector graph of height
//!    at most L-1 and is solved exactly;
//! 2. each marginal row is then solved as a one-row vector graph under
//!    constraint sets that exclude any cell independent set conflicting with
//!    the already-fixed floor selections ("stuffing");
//! 3. the division whose combined selection has the largest normalized
//!    weighted cardinality wins (smallest index on ties).
//!
//! Every row is non-marginal in L-1 of the L divisions, so the average
//! division retains at least (L-1)/L of the optimum and the best one does
//! too; the emitted reuse ratio is therefore above (L-1)/L of the exact one.
//!
//! Exact mode (requested, or forced when L >= M) bypasses the scheme and
//! solves each color by the full-stack column DP shared with the oracle.
//!
//! Zero-weight vertices are excluded from all catalogs: they can never
//! improve a class and their absence does not change any normalized
//! cardinality.

use serde::Serialize;

use crate::error::Result;
use crate::floor_division::{build_scheme, Division};
use crate::matrix_graph::{reuse_ratio, Coloring, MatrixGraph, WeightAssignment};
use crate::oracle;
use crate::vector_dp::{
    build_catalogs, solve_with_catalogs, stack_rows_filtered, Catalogs, ConstraintSets,
    VectorGraph, DEFAULT_CELL_CAP,
};

/// Solver configuration: floor height, or exact full-stack mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolveConfig {
    pub floor_height: usize,
    pub exact_mode: bool,
}

impl SolveConfig {
    pub fn floor(floor_height: usize) -> Self {
        SolveConfig {
            floor_height,
            exact_mode: false,
        }
    }

    pub fn exact() -> Self {
        SolveConfig {
            floor_height: 0,
            exact_mode: true,
        }
    }
}

/// Per-color solve trace.
#[derive(Debug, Clone, Serialize)]
pub struct ColorReport {
    pub color: usize,
    /// Winning division index; absent in exact mode.
    pub chosen_division: Option<usize>,
    /// |S_t|_N for every division t (after marginal stuffing).
    pub division_nwc: Vec<f64>,
    /// |S_t|_N before the marginal pass.
    pub division_base_nwc: Vec<f64>,
    /// Normalized weighted cardinality of the emitted class.
    pub b_c: f64,
}

/// Full solve trace; `fbar` always equals the reuse ratio recomputed from the
/// returned coloring.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub colors: usize,
    /// Effective floor height (0 in exact mode).
    pub floor_height: usize,
    pub exact_mode: bool,
    /// (L-1)/L in floor mode, 1 in exact mode.
    pub guarantee: f64,
    pub fbar: f64,
    pub per_color: Vec<ColorReport>,
    /// DP transitions across all sub-solves.
    pub transitions: u64,
    /// Largest independent-set catalog encountered.
    pub max_catalog: usize,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Solves the multi-coloring problem on `graph` under `weights`; the number
/// of colors comes from the weight assignment.
pub fn solve_mgc(
    graph: &MatrixGraph,
    weights: &WeightAssignment,
    cfg: &SolveConfig,
) -> Result<(Coloring, SolveReport)> {
    assert_eq!(graph.vertex_count(), weights.vertex_count());
    let colors = weights.colors();

    // L >= M leaves no room for floor division; the full stack is exact and
    // cheaper there anyway.
    let exact = cfg.exact_mode || cfg.floor_height >= graph.rows();
    let scheme = if exact {
        None
    } else {
        Some(build_scheme(graph.rows(), cfg.floor_height)?)
    };

    let mut coloring = Coloring::empty(graph.vertex_count(), colors);
    let mut per_color = Vec::with_capacity(colors);
    let mut transitions = 0u64;
    let mut max_catalog = 0usize;

    for c in 1..=colors {
        let u = weights.color_weights(c);
        let total_u: f64 = u.iter().sum();
        let nwc_of = |w: f64| if total_u > 0.0 { w / total_u } else { 0.0 };

        let report = match &scheme {
            None => {
                let sol = oracle::exact_mwis_stacked(graph, &u)?;
                for &v in &sol.vertices {
                    coloring.set(v, c, true);
                }
                transitions += sol.nodes;
                ColorReport {
                    color: c,
                    chosen_division: None,
                    division_nwc: Vec::new(),
                    division_base_nwc: Vec::new(),
                    b_c: sol.nwc,
                }
            }
            Some(scheme) => {
                let mut division_nwc = Vec::with_capacity(scheme.divisions.len());
                let mut division_base_nwc = Vec::with_capacity(scheme.divisions.len());
                let mut best: Option<(usize, f64, Vec<usize>)> = None;
                for (t, division) in scheme.divisions.iter().enumerate() {
                    let outcome = solve_division(graph, division, &u)?;
                    transitions += outcome.transitions;
                    max_catalog = max_catalog.max(outcome.max_catalog);
                    let nwc = nwc_of(outcome.weight);
                    division_nwc.push(nwc);
                    division_base_nwc.push(nwc_of(outcome.base_weight));
                    // Strictly-greater keeps the smallest t on ties.
                    if best.as_ref().map_or(true, |(_, w, _)| outcome.weight > *w) {
                        best = Some((t, outcome.weight, outcome.selected));
                    }
                }
                let (t_star, weight, selected) = best.expect("L >= 2 divisions");
                for &v in &selected {
                    coloring.set(v, c, true);
                }
                ColorReport {
                    color: c,
                    chosen_division: Some(t_star),
                    division_nwc,
                    division_base_nwc,
                    b_c: nwc_of(weight),
                }
            }
        };
        per_color.push(report);
    }

    let fbar = reuse_ratio(&coloring, weights);
    let report = SolveReport {
        colors,
        floor_height: if exact { 0 } else { cfg.floor_height },
        exact_mode: exact,
        guarantee: if exact {
            1.0
        } else {
            1.0 - 1.0 / cfg.floor_height as f64
        },
        fbar,
        per_color,
        transitions,
        max_catalog,
    };
    Ok((coloring, report))
}

struct DivisionOutcome {
    selected: Vec<usize>,
    /// Selection weight before the marginal pass.
    base_weight: f64,
    /// Final selection weight.
    weight: f64,
    transitions: u64,
    max_catalog: usize,
}

/// One division of one color: exact MWIS on every floor-minus-marginal stack,
/// then the constrained marginal pass.
fn solve_division(graph: &MatrixGraph, division: &Division, u: &[f64]) -> Result<DivisionOutcome> {
    let keep = |v: usize| u[v] > 0.0;
    let mut picked = vec![false; graph.vertex_count()];
    let mut selected = Vec::new();
    let mut transitions = 0u64;
    let mut max_catalog = 0usize;

    for floor in &division.floors {
        let rows = floor.non_marginal_rows();
        if rows.is_empty() {
            continue;
        }
        let vg = stack_rows_filtered(graph, &rows, None, &keep)?;
        let sol = solve_with_unconstrained(&vg, u)?;
        transitions += sol.0;
        max_catalog = max_catalog.max(sol.1);
        for v in sol.2 {
            picked[v] = true;
            selected.push(v);
        }
    }
    let base_weight: f64 = selected.iter().map(|&v| u[v]).sum();

    for floor in &division.floors {
        let Some(marginal_row) = floor.marginal else {
            continue;
        };
        let vg = stack_rows_filtered(graph, &[marginal_row], None, &keep)?;
        let catalogs = build_catalogs(&vg, u, DEFAULT_CELL_CAP)?;
        let constraints = induced_marginal_constraints(graph, &vg, &catalogs, &picked);
        let sol = solve_with_catalogs(&vg, &catalogs, &constraints)?;
        transitions += sol.transitions;
        max_catalog = max_catalog.max(sol.max_catalog);
        for v in sol.vertices {
            picked[v] = true;
            selected.push(v);
        }
    }

    let weight: f64 = selected.iter().map(|&v| u[v]).sum();
    selected.sort_unstable();
    Ok(DivisionOutcome {
        selected,
        base_weight,
        weight,
        transitions,
        max_catalog,
    })
}

fn solve_with_unconstrained(vg: &VectorGraph, u: &[f64]) -> Result<(u64, usize, Vec<usize>)> {
    let catalogs = build_catalogs(vg, u, DEFAULT_CELL_CAP)?;
    let sol = solve_with_catalogs(
        vg,
        &catalogs,
        &ConstraintSets::unconstrained(vg.cell_count()),
    )?;
    Ok((sol.transitions, sol.max_catalog, sol.vertices))
}

/// Constraint sets for a marginal row: a cell's independent set stays
/// admissible only when none of its vertices has a graph edge to a vertex
/// already fixed elsewhere in the division. The empty set always survives.
pub fn induced_marginal_constraints(
    graph: &MatrixGraph,
    marginal: &VectorGraph,
    catalogs: &Catalogs,
    fixed: &[bool],
) -> ConstraintSets {
    let mut constraints = ConstraintSets::unconstrained(marginal.cell_count());
    for (cell, members) in marginal.cells().iter().enumerate() {
        let mut blocked = 0u32;
        for (local, &v) in members.iter().enumerate() {
            if graph.neighbors(v).iter().any(|&w| fixed[w]) {
                blocked |= 1 << local;
            }
        }
        if blocked != 0 {
            let flags = catalogs.per_cell[cell]
                .masks
                .iter()
                .map(|&m| m & blocked == 0)
                .collect();
            constraints.restrict(cell, flags);
        }
    }
    constraints
}
