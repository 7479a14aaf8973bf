//! Matrix-graph data model: the M-by-N lattice of cells, multi-colorings,
//! weights, construction from spatial graphs, and the reuse-ratio metrics.
//!
//! Vertices are addressed two ways. A [`VertexRef`] `(m, n, i)` names row,
//! column and within-cell position, all 1-based; a flat `usize` id enumerates
//! vertices cell by cell in row-major order with `i` ascending. Flat-id order
//! therefore coincides with lexicographic `VertexRef` order, which the
//! deterministic tie-break rules rely on.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SpatialGraph;

/// 1-based address of a vertex: row, column, within-cell index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexRef {
    pub m: u32,
    pub n: u32,
    pub i: u32,
}

impl std::fmt::Display for VertexRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v({},{},{})", self.m, self.n, self.i)
    }
}

/// An M-by-N lattice of cells with edges confined to the 8-neighborhood:
/// an edge between cells (m1,n1) and (m2,n2) requires |m1-m2| <= 1 and
/// |n1-n2| <= 1. No wraparound: rows M and 1 are not adjacent.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGraph {
    rows: usize,
    cols: usize,
    cell_len: Vec<usize>,
    cell_off: Vec<usize>,
    vertices: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl MatrixGraph {
    /// Builds a graph from per-cell vertex counts (row-major, length M*N) and
    /// flat-id edges. Rejects self-loops, out-of-range endpoints and edges
    /// whose cells are not 8-neighbors; duplicate edges are merged.
    pub fn new(
        rows: usize,
        cols: usize,
        cell_len: Vec<usize>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(
                "matrix graph needs at least one row and one column".into(),
            ));
        }
        if cell_len.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "expected {} cell sizes, got {}",
                rows * cols,
                cell_len.len()
            )));
        }
        let mut cell_off = Vec::with_capacity(cell_len.len());
        let mut total = 0usize;
        for &l in &cell_len {
            cell_off.push(total);
            total += l;
        }
        let mut graph = MatrixGraph {
            rows,
            cols,
            cell_len,
            cell_off,
            vertices: total,
            edges: Vec::new(),
            adj: vec![Vec::new(); total],
        };
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {a}")));
            }
            if a >= total || b >= total {
                return Err(Error::InvalidParameter(format!(
                    "edge ({a},{b}) out of range for {total} vertices"
                )));
            }
            let ra = graph.vertex_ref(a);
            let rb = graph.vertex_ref(b);
            if ra.m.abs_diff(rb.m) > 1 || ra.n.abs_diff(rb.n) > 1 {
                return Err(Error::InvalidParameter(format!(
                    "edge {ra}-{rb} joins non-adjacent cells"
                )));
            }
            seen.insert((a.min(b), a.max(b)));
        }
        graph.edges = seen.into_iter().collect();
        for &(a, b) in &graph.edges {
            graph.adj[a].push(b);
            graph.adj[b].push(a);
        }
        for l in &mut graph.adj {
            l.sort_unstable();
        }
        Ok(graph)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    fn cell_index(&self, m: usize, n: usize) -> usize {
        debug_assert!((1..=self.rows).contains(&m) && (1..=self.cols).contains(&n));
        (m - 1) * self.cols + (n - 1)
    }

    /// Number of vertices in cell (m, n); arguments 1-based.
    pub fn cell_size(&self, m: usize, n: usize) -> usize {
        self.cell_len[self.cell_index(m, n)]
    }

    /// Flat ids of the vertices in cell (m, n), in ascending `i`.
    pub fn cell_vertices(&self, m: usize, n: usize) -> std::ops::Range<usize> {
        let c = self.cell_index(m, n);
        self.cell_off[c]..self.cell_off[c] + self.cell_len[c]
    }

    pub fn vertex_ref(&self, flat: usize) -> VertexRef {
        debug_assert!(flat < self.vertices);
        // Cells are short; binary-search the offset table.
        let cell = match self.cell_off.binary_search(&flat) {
            Ok(c) => {
                // Offsets repeat at empty cells; take the last cell starting here
                // that is non-empty.
                let mut c = c;
                while self.cell_len[c] == 0 {
                    c += 1;
                }
                c
            }
            Err(ins) => ins - 1,
        };
        VertexRef {
            m: (cell / self.cols + 1) as u32,
            n: (cell % self.cols + 1) as u32,
            i: (flat - self.cell_off[cell] + 1) as u32,
        }
    }

    pub fn flat_id(&self, r: VertexRef) -> usize {
        let c = self.cell_index(r.m as usize, r.n as usize);
        debug_assert!((1..=self.cell_len[c]).contains(&(r.i as usize)));
        self.cell_off[c] + r.i as usize - 1
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn to_json(&self) -> String {
        let file = MatrixGraphFile {
            m: self.rows,
            n: self.cols,
            cells: (1..=self.rows)
                .map(|m| (1..=self.cols).map(|n| self.cell_size(m, n)).collect())
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (ra, rb) = (self.vertex_ref(a), self.vertex_ref(b));
                    [[ra.m, ra.n, ra.i], [rb.m, rb.n, rb.i]]
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("matrix graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixGraphFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedData(e.to_string()))?;
        if file.cells.len() != file.m || file.cells.iter().any(|r| r.len() != file.n) {
            return Err(Error::MalformedData(
                "cell table does not match M x N".into(),
            ));
        }
        let cell_len: Vec<usize> = file.cells.into_iter().flatten().collect();
        let mut graph = MatrixGraph::new(file.m, file.n, cell_len, Vec::new())?;
        let mut edges = Vec::with_capacity(file.edges.len());
        for [[m1, n1, i1], [m2, n2, i2]] in file.edges {
            let check = |m: u32, n: u32, i: u32| -> Result<usize> {
                if !(1..=file.m as u32).contains(&m)
                    || !(1..=file.n as u32).contains(&n)
                    || i < 1
                    || i as usize > graph.cell_size(m as usize, n as usize)
                {
                    return Err(Error::MalformedData(format!(
                        "vertex ({m},{n},{i}) out of range"
                    )));
                }
                Ok(graph.flat_id(VertexRef { m, n, i }))
            };
            edges.push((check(m1, n1, i1)?, check(m2, n2, i2)?));
        }
        graph = MatrixGraph::new(graph.rows, graph.cols, graph.cell_len, edges)?;
        Ok(graph)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixGraphFile {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    cells: Vec<Vec<usize>>,
    edges: Vec<[[u32; 3]; 2]>,
}

/// Vertex weights `w` and per-color weights `mu`, both nonnegative.
/// `mu` is stored flat: entry for vertex `v`, color `c` sits at `v*C + (c-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightAssignment {
    w: Vec<f64>,
    mu: Vec<f64>,
    colors: usize,
}

impl WeightAssignment {
    pub fn new(w: Vec<f64>, mu: Vec<f64>, colors: usize) -> Result<Self> {
        if colors == 0 {
            return Err(Error::InvalidParameter("need at least one color".into()));
        }
        if mu.len() != w.len() * colors {
            return Err(Error::InvalidParameter(format!(
                "mu has {} entries, expected {} vertices x {} colors",
                mu.len(),
                w.len(),
                colors
            )));
        }
        if w.iter()
            .chain(mu.iter())
            .any(|x| !x.is_finite() || *x < 0.0)
        {
            return Err(Error::InvalidParameter(
                "weights must be finite and nonnegative".into(),
            ));
        }
        Ok(WeightAssignment { w, mu, colors })
    }

    /// All-ones weights: `w = 1`, `mu = 1`.
    pub fn uniform(vertices: usize, colors: usize) -> Self {
        WeightAssignment {
            w: vec![1.0; vertices],
            mu: vec![1.0; vertices * colors],
            colors,
        }
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn vertex_count(&self) -> usize {
        self.w.len()
    }

    pub fn w(&self, v: usize) -> f64 {
        self.w[v]
    }

    pub fn mu(&self, v: usize, c: usize) -> f64 {
        debug_assert!((1..=self.colors).contains(&c));
        self.mu[v * self.colors + (c - 1)]
    }

    /// Per-color vertex weights `u_v = w_v * mu(v, c)`.
    pub fn color_weights(&self, c: usize) -> Vec<f64> {
        (0..self.w.len())
            .map(|v| self.w[v] * self.mu(v, c))
            .collect()
    }

    pub fn total_w(&self) -> f64 {
        self.w.iter().sum()
    }

    pub fn w_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn mu_slice(&self) -> &[f64] {
        &self.mu
    }
}

/// Binary multi-coloring: `get(v, c)` says whether color `c` (1-based) is
/// assigned to vertex `v` (flat id).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    vertices: usize,
    colors: usize,
    bits: Vec<bool>,
}

impl Coloring {
    pub fn empty(vertices: usize, colors: usize) -> Self {
        Coloring {
            vertices,
            colors,
            bits: vec![false; vertices * colors],
        }
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn get(&self, v: usize, c: usize) -> bool {
        debug_assert!((1..=self.colors).contains(&c));
        self.bits[v * self.colors + (c - 1)]
    }

    pub fn set(&mut self, v: usize, c: usize, value: bool) {
        debug_assert!((1..=self.colors).contains(&c));
        self.bits[v * self.colors + (c - 1)] = value;
    }

    /// Vertices holding color `c`.
    pub fn color_class(&self, c: usize) -> Vec<usize> {
        (0..self.vertices).filter(|&v| self.get(v, c)).collect()
    }

    /// Sparse `[m, n, i, c]` quadruples, sorted; the on-disk format.
    pub fn to_quadruples(&self, graph: &MatrixGraph) -> Vec<[u32; 4]> {
        let mut out = Vec::new();
        for v in 0..self.vertices {
            let r = graph.vertex_ref(v);
            for c in 1..=self.colors {
                if self.get(v, c) {
                    out.push([r.m, r.n, r.i, c as u32]);
                }
            }
        }
        out
    }

    pub fn from_quadruples(
        graph: &MatrixGraph,
        colors: usize,
        entries: &[[u32; 4]],
    ) -> Result<Self> {
        let mut coloring = Coloring::empty(graph.vertex_count(), colors);
        for &[m, n, i, c] in entries {
            if !(1..=colors as u32).contains(&c) {
                return Err(Error::MalformedData(format!("color {c} out of range")));
            }
            if !(1..=graph.rows() as u32).contains(&m)
                || !(1..=graph.cols() as u32).contains(&n)
                || i < 1
                || i as usize > graph.cell_size(m as usize, n as usize)
            {
                return Err(Error::MalformedData(format!(
                    "vertex ({m},{n},{i}) out of range"
                )));
            }
            let v = graph.flat_id(VertexRef { m, n, i });
            coloring.set(v, c as usize, true);
        }
        Ok(coloring)
    }

    pub fn to_json(&self, graph: &MatrixGraph) -> String {
        serde_json::to_string(&self.to_quadruples(graph)).expect("coloring serializes")
    }

    pub fn from_json(graph: &MatrixGraph, colors: usize, text: &str) -> Result<Self> {
        let entries: Vec<[u32; 4]> =
            serde_json::from_str(text).map_err(|e| Error::MalformedData(e.to_string()))?;
        Self::from_quadruples(graph, colors, &entries)
    }
}

/// Spatial-graph edges whose endpoints landed in non-adjacent cells. Pairs are
/// flat matrix-vertex ids (normalized `u < v`); `spatial_pairs` keeps the
/// originating point ids for bookkeeping.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DroppedEdgeList {
    pub pairs: Vec<(usize, usize)>,
    pub spatial_pairs: Vec<(usize, usize)>,
}

impl DroppedEdgeList {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Output of [`build_from_spatial`]: the lattice graph, the dropped edges and
/// the point-id -> flat-vertex-id map.
#[derive(Debug, Clone)]
pub struct SpatialBuild {
    pub graph: MatrixGraph,
    pub dropped: DroppedEdgeList,
    pub point_vertex: Vec<usize>,
}

/// Snaps a spatial graph onto the lattice of side-`a` squares. Each point goes
/// to the half-open square `[(n-1)a, na) x [(m-1)a, ma)` containing it (far
/// boundary clamps to the last cell); edges joining cells with a row or column
/// gap above 1 go to the dropped list, all others are kept.
pub fn build_from_spatial(spatial: &SpatialGraph, a: f64) -> Result<SpatialBuild> {
    let (width, height) = spatial.region();
    let (rows, cols) = grid_dims(width, height, a)?;
    let points = spatial.points();

    // Count per cell first, then hand out flat ids in point-id order.
    let cell_of = |x: f64, y: f64| -> (usize, usize) {
        let n = ((x / a).floor() as isize + 1).clamp(1, cols as isize) as usize;
        let m = ((y / a).floor() as isize + 1).clamp(1, rows as isize) as usize;
        (m, n)
    };
    let mut cell_len = vec![0usize; rows * cols];
    let mut cells: Vec<(usize, usize)> = Vec::with_capacity(points.len());
    for p in points {
        let (m, n) = cell_of(p.x, p.y);
        cell_len[(m - 1) * cols + (n - 1)] += 1;
        cells.push((m, n));
    }
    let mut cell_off = vec![0usize; rows * cols];
    let mut acc = 0;
    for (off, len) in cell_off.iter_mut().zip(&cell_len) {
        *off = acc;
        acc += len;
    }
    let mut next_in_cell = vec![0usize; rows * cols];
    let mut point_vertex = vec![0usize; points.len()];
    for (pid, &(m, n)) in cells.iter().enumerate() {
        let c = (m - 1) * cols + (n - 1);
        point_vertex[pid] = cell_off[c] + next_in_cell[c];
        next_in_cell[c] += 1;
    }

    let mut kept = Vec::new();
    let mut dropped = DroppedEdgeList::default();
    for &(p, q) in spatial.edges() {
        let (m1, n1) = cells[p];
        let (m2, n2) = cells[q];
        let (u, v) = (point_vertex[p], point_vertex[q]);
        let (u, v) = (u.min(v), u.max(v));
        if m1.abs_diff(m2) <= 1 && n1.abs_diff(n2) <= 1 {
            kept.push((u, v));
        } else {
            dropped.pairs.push((u, v));
            dropped.spatial_pairs.push((p.min(q), p.max(q)));
        }
    }
    let graph = MatrixGraph::new(rows, cols, cell_len, kept)?;
    Ok(SpatialBuild {
        graph,
        dropped,
        point_vertex,
    })
}

/// Resolves `width x height` into (rows, cols) of side-`a` cells, rejecting
/// regions that do not divide evenly (1e-9 relative tolerance).
pub fn grid_dims(width: f64, height: f64, a: f64) -> Result<(usize, usize)> {
    if !(a > 0.0) || !(width > 0.0) || !(height > 0.0) {
        return Err(Error::InvalidParameter(
            "region sides and cell size must be positive".into(),
        ));
    }
    let snap = |len: f64| -> Option<usize> {
        let k = (len / a).round();
        if k >= 1.0 && ((k * a - len) / len).abs() < 1e-9 {
            Some(k as usize)
        } else {
            None
        }
    };
    match (snap(height), snap(width)) {
        (Some(rows), Some(cols)) => Ok((rows, cols)),
        _ => Err(Error::RegionMismatch {
            width,
            height,
            cell_size: a,
        }),
    }
}

/// Cancels color collisions across dropped edges: wherever both endpoints of a
/// dropped edge hold the same color, the endpoint with the smaller
/// `w * mu(., c)` loses it (ties clear the lexicographically larger vertex).
/// The result is proper on the original spatial graph whenever the input was
/// proper on the matrix graph.
pub fn validity_check(
    coloring: &Coloring,
    dropped: &DroppedEdgeList,
    weights: &WeightAssignment,
) -> Coloring {
    let mut out = coloring.clone();
    for &(u, v) in &dropped.pairs {
        for c in 1..=out.colors() {
            if out.get(u, c) && out.get(v, c) {
                let wu = weights.w(u) * weights.mu(u, c);
                let wv = weights.w(v) * weights.mu(v, c);
                // Ties clear the larger vertex; flat-id order equals
                // lexicographic VertexRef order and u < v by normalization.
                let clear = if wu < wv { u } else { v };
                out.set(clear, c, false);
            }
        }
    }
    out
}

/// Weighted reuse ratio: `sum_v w_v f_v / sum_v w_v` with
/// `f_v = (1/C) sum_c assign(v,c) mu(v,c)`. Returns 0 when all `w` vanish.
pub fn reuse_ratio(coloring: &Coloring, weights: &WeightAssignment) -> f64 {
    assert_eq!(coloring.vertex_count(), weights.vertex_count());
    assert_eq!(coloring.colors(), weights.colors());
    let c_count = coloring.colors() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for v in 0..coloring.vertex_count() {
        let mut fv = 0.0;
        for c in 1..=coloring.colors() {
            if coloring.get(v, c) {
                fv += weights.mu(v, c);
            }
        }
        fv /= c_count;
        num += weights.w(v) * fv;
        den += weights.w(v);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Normalized weighted cardinality of color class `c`:
/// `sum_v assign(v,c) w_v mu(v,c) / sum_v w_v mu(v,c)`; 0 when the
/// denominator vanishes.
pub fn per_color_nwc(coloring: &Coloring, weights: &WeightAssignment, c: usize) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for v in 0..coloring.vertex_count() {
        let uw = weights.w(v) * weights.mu(v, c);
        den += uw;
        if coloring.get(v, c) {
            num += uw;
        }
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// A color shared by both endpoints of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorViolation {
    pub u: usize,
    pub v: usize,
    pub color: usize,
}

/// Exhaustive edge-by-color properness scan.
pub fn is_proper(graph: &MatrixGraph, coloring: &Coloring) -> (bool, Vec<ColorViolation>) {
    let mut violations = Vec::new();
    for &(u, v) in graph.edges() {
        for c in 1..=coloring.colors() {
            if coloring.get(u, c) && coloring.get(v, c) {
                violations.push(ColorViolation { u, v, color: c });
            }
        }
    }
    (violations.is_empty(), violations)
}
