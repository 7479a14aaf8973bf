//! Comparison heuristics: greedy list-coloring and a simplified
//! soft-frequency-reuse scheme on the cell lattice.

use crate::error::{Error, Result};
use crate::matrix_graph::{Coloring, MatrixGraph, WeightAssignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    GreedyListColoring,
    SimplifiedSfr,
}

/// Greedy list-coloring: repeatedly assign the highest-value `(vertex, color)`
/// pair that does not conflict with the current assignment, until none is
/// assignable. Priorities `w * mu` are static, so a single sweep over the
/// pairs sorted by (value desc, vertex, color) is equivalent to repeated
/// arg-max picks. Zero-value pairs are skipped; they cannot move the metric.
pub fn greedy_list_coloring(graph: &MatrixGraph, weights: &WeightAssignment) -> Coloring {
    let colors = weights.colors();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for v in 0..graph.vertex_count() {
        for c in 1..=colors {
            let value = weights.w(v) * weights.mu(v, c);
            if value > 0.0 {
                pairs.push((value, v, c));
            }
        }
    }
    pairs.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .expect("weights are finite")
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut coloring = Coloring::empty(graph.vertex_count(), colors);
    for (_, v, c) in pairs {
        let blocked = graph.neighbors(v).iter().any(|&w| coloring.get(w, c));
        if !blocked {
            coloring.set(v, c, true);
        }
    }
    coloring
}

/// Simplified soft frequency reuse. The color pool splits into three edge
/// sub-bands of floor(C/3) colors plus a center band of the remainder; cell
/// (m, n) owns sub-band `(m + n) mod 3`. Vertices with no inter-cell edge are
/// *center* vertices and may take any conflict-free color (center band first,
/// then the own sub-band, then the rest); other vertices take only their
/// cell's sub-band, greedily by value within the cell. Needs C >= 4.
pub fn simplified_sfr(graph: &MatrixGraph, weights: &WeightAssignment) -> Result<Coloring> {
    let colors = weights.colors();
    if colors < 4 {
        return Err(Error::InvalidParameter(format!(
            "simplified SFR needs at least 4 colors (3 edge sub-bands plus a center band), got {colors}"
        )));
    }
    let band_size = colors / 3;
    let sub_band =
        |b: usize| -> std::ops::RangeInclusive<usize> { b * band_size + 1..=(b + 1) * band_size };
    let center_band = 3 * band_size + 1..=colors;

    let is_center: Vec<bool> = (0..graph.vertex_count())
        .map(|v| {
            let home = graph.vertex_ref(v);
            graph.neighbors(v).iter().all(|&w| {
                let other = graph.vertex_ref(w);
                (other.m, other.n) == (home.m, home.n)
            })
        })
        .collect();

    let mut coloring = Coloring::empty(graph.vertex_count(), colors);
    let try_assign = |coloring: &mut Coloring, v: usize, c: usize| {
        if weights.w(v) * weights.mu(v, c) <= 0.0 {
            return;
        }
        if graph.neighbors(v).iter().any(|&w| coloring.get(w, c)) {
            return;
        }
        coloring.set(v, c, true);
    };

    // Cell-edge vertices first: own sub-band only, heaviest first per color.
    for m in 1..=graph.rows() {
        for n in 1..=graph.cols() {
            let band = (m + n) % 3;
            for c in sub_band(band) {
                let mut members: Vec<usize> = graph
                    .cell_vertices(m, n)
                    .filter(|&v| !is_center[v])
                    .collect();
                members.sort_by(|&a, &b| {
                    let va = weights.w(a) * weights.mu(a, c);
                    let vb = weights.w(b) * weights.mu(b, c);
                    vb.partial_cmp(&va)
                        .expect("weights are finite")
                        .then(a.cmp(&b))
                });
                for v in members {
                    try_assign(&mut coloring, v, c);
                }
            }
        }
    }

    // Center vertices: center band, own sub-band, then everything else.
    for m in 1..=graph.rows() {
        for n in 1..=graph.cols() {
            let band = (m + n) % 3;
            for v in graph.cell_vertices(m, n).filter(|&v| is_center[v]) {
                for c in center_band.clone().chain(sub_band(band)) {
                    try_assign(&mut coloring, v, c);
                }
                for b in 0..3 {
                    if b == band {
                        continue;
                    }
                    for c in sub_band(b) {
                        try_assign(&mut coloring, v, c);
                    }
                }
            }
        }
    }
    Ok(coloring)
}
