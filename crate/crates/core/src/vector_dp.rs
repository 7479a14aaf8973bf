//! Exact maximum-weight independent sets on vector graphs.
//!
//! A vector graph is a one-dimensional matrix graph: a sequence of cells with
//! edges confined to one cell or two consecutive cells. The solver enumerates
//! every independent set of each cell (its *catalog*), then runs a
//! Viterbi-style dynamic program over the cell sequence: the state at cell `n`
//! is the catalog index of the independent set chosen there, a transition
//! `(l, k)` is legal when no edge joins the two sets, and each state keeps the
//! single best-weight prefix. Optional per-cell constraint sets restrict which
//! catalog entries are admissible, which is how a higher layer injects
//! conflicts from outside the row being solved.
//!
//! Cells are small by construction (the lattice squares hold a handful of
//! links each), so catalogs are stored as `u32` bitmasks over local vertex
//! indices and every compatibility test is two AND operations.

use crate::error::{Error, Result};
use crate::matrix_graph::MatrixGraph;

/// Catalog cap: cells (or stacked big cells) above this many vertices are
/// refused rather than enumerated.
pub const DEFAULT_CELL_CAP: usize = 20;

/// One-dimensional matrix graph whose cells reference vertices of an
/// underlying graph by their original flat ids.
#[derive(Debug, Clone)]
pub struct VectorGraph {
    /// Original vertex ids per cell, in local-index order.
    cells: Vec<Vec<usize>>,
    /// Per cell: adjacency masks among locals (intra-cell edges).
    intra_adj: Vec<Vec<u32>>,
    /// Per cell `n >= 1`: for each local `j`, mask of cell `n-1` locals that
    /// conflict with it. Entry 0 is an empty table.
    back_conflict: Vec<Vec<u32>>,
}

impl VectorGraph {
    /// Builds a vector graph from explicit cells and edges over original ids.
    /// Edges must stay within a cell or join consecutive cells.
    pub fn from_parts(cells: Vec<Vec<usize>>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut locate = std::collections::HashMap::new();
        for (c, members) in cells.iter().enumerate() {
            if members.len() > 32 {
                return Err(Error::CellTooLarge {
                    size: members.len(),
                    cap: 32,
                });
            }
            for (local, &id) in members.iter().enumerate() {
                if locate.insert(id, (c, local)).is_some() {
                    return Err(Error::InvalidParameter(format!(
                        "vertex {id} appears in two cells"
                    )));
                }
            }
        }
        let mut graph = VectorGraph {
            intra_adj: cells.iter().map(|c| vec![0u32; c.len()]).collect(),
            back_conflict: cells.iter().map(|c| vec![0u32; c.len()]).collect(),
            cells,
        };
        for &(a, b) in edges {
            let (&(ca, la), &(cb, lb)) = match (locate.get(&a), locate.get(&b)) {
                (Some(x), Some(y)) => (x, y),
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "edge ({a},{b}) references a vertex outside the cells"
                    )))
                }
            };
            graph.add_edge(ca, la, cb, lb, a, b)?;
        }
        Ok(graph)
    }

    fn add_edge(
        &mut self,
        ca: usize,
        la: usize,
        cb: usize,
        lb: usize,
        a: usize,
        b: usize,
    ) -> Result<()> {
        if ca == cb {
            if la == lb {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {a}")));
            }
            self.intra_adj[ca][la] |= 1 << lb;
            self.intra_adj[cb][lb] |= 1 << la;
        } else if ca.abs_diff(cb) == 1 {
            let (cell_hi, l_hi, l_lo) = if ca > cb { (ca, la, lb) } else { (cb, lb, la) };
            self.back_conflict[cell_hi][l_hi] |= 1 << l_lo;
        } else {
            return Err(Error::LocalityViolation(format!(
                "edge ({a},{b}) joins cells {ca} and {cb}"
            )));
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn vertex_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn intra_adjacency(&self, cell: usize) -> &[u32] {
        &self.intra_adj[cell]
    }

    /// Conflict masks of cell `n`'s locals against cell `n-1`'s locals.
    pub fn back_conflicts(&self, cell: usize) -> &[u32] {
        &self.back_conflict[cell]
    }
}

/// Stacks a subset of rows into a vector graph: big cell `n` is the union of
/// cells `(m, n)` for `m` in `rows` (in the given order), columns optionally
/// restricted to an inclusive 1-based range. All induced edges are preserved;
/// matrix-graph locality guarantees they stay within one or two consecutive
/// big cells.
pub fn stack_rows(
    graph: &MatrixGraph,
    rows: &[usize],
    col_range: Option<(usize, usize)>,
) -> Result<VectorGraph> {
    stack_rows_filtered(graph, rows, col_range, &|_| true)
}

/// [`stack_rows`] with a vertex filter; vertices failing `keep` are left out
/// of the stacked graph entirely.
pub fn stack_rows_filtered(
    graph: &MatrixGraph,
    rows: &[usize],
    col_range: Option<(usize, usize)>,
    keep: &dyn Fn(usize) -> bool,
) -> Result<VectorGraph> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("row subset is empty".into()));
    }
    let mut seen = vec![false; graph.rows() + 1];
    for &m in rows {
        if !(1..=graph.rows()).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "row {m} outside 1..={}",
                graph.rows()
            )));
        }
        if std::mem::replace(&mut seen[m], true) {
            return Err(Error::InvalidParameter(format!("row {m} listed twice")));
        }
    }
    let (n0, n1) = col_range.unwrap_or((1, graph.cols()));
    if n0 < 1 || n1 > graph.cols() || n0 > n1 {
        return Err(Error::InvalidParameter(format!(
            "column range {n0}..={n1} invalid for {} columns",
            graph.cols()
        )));
    }

    let mut cells = Vec::with_capacity(n1 - n0 + 1);
    let mut locate = std::collections::HashMap::new();
    for n in n0..=n1 {
        let mut members = Vec::new();
        for &m in rows {
            for v in graph.cell_vertices(m, n) {
                if keep(v) {
                    locate.insert(v, (cells.len(), members.len()));
                    members.push(v);
                }
            }
        }
        cells.push(members);
    }
    let mut vg = VectorGraph {
        intra_adj: cells.iter().map(|c| vec![0u32; c.len()]).collect(),
        back_conflict: cells.iter().map(|c| vec![0u32; c.len()]).collect(),
        cells,
    };
    for &(a, b) in graph.edges() {
        if let (Some(&(ca, la)), Some(&(cb, lb))) = (locate.get(&a), locate.get(&b)) {
            vg.add_edge(ca, la, cb, lb, a, b)?;
        }
    }
    Ok(vg)
}

/// Enumerates every independent set of a cell given its local adjacency
/// masks, the empty set first, in depth-first lexicographic order. Errors
/// above `cap` vertices.
pub fn enumerate_cell_is(intra_adj: &[u32], cap: usize) -> Result<Vec<u32>> {
    if intra_adj.len() > cap {
        return Err(Error::CellTooLarge {
            size: intra_adj.len(),
            cap,
        });
    }
    let mut out = Vec::new();
    fn rec(adj: &[u32], from: usize, cur: u32, out: &mut Vec<u32>) {
        out.push(cur);
        for v in from..adj.len() {
            if adj[v] & cur == 0 {
                rec(adj, v + 1, cur | (1 << v), out);
            }
        }
    }
    rec(intra_adj, 0, 0, &mut out);
    Ok(out)
}

/// Per-cell independent-set catalog plus derived tables for O(1) transition
/// checks.
#[derive(Debug, Clone)]
pub struct CellCatalog {
    /// All independent sets of the cell as local bitmasks; entry 0 is empty.
    pub masks: Vec<u32>,
    /// Weight of each set under the current vertex weights.
    pub weights: Vec<f64>,
    /// Union of back-conflict masks over the set's members: which locals of
    /// the previous cell clash with this set.
    pub back_union: Vec<u32>,
}

/// Catalogs for every cell of one vector graph.
#[derive(Debug, Clone)]
pub struct Catalogs {
    pub per_cell: Vec<CellCatalog>,
    /// Total weight of all vertices in the graph (NWC denominator).
    pub total_weight: f64,
}

impl Catalogs {
    pub fn max_catalog(&self) -> usize {
        self.per_cell
            .iter()
            .map(|c| c.masks.len())
            .max()
            .unwrap_or(0)
    }
}

/// Builds all cell catalogs under vertex weights `u` (indexed by original id).
pub fn build_catalogs(vg: &VectorGraph, u: &[f64], cap: usize) -> Result<Catalogs> {
    let mut per_cell = Vec::with_capacity(vg.cell_count());
    let mut total_weight = 0.0;
    for cell in 0..vg.cell_count() {
        let members = &vg.cells()[cell];
        total_weight += members.iter().map(|&v| u[v]).sum::<f64>();
        let masks = enumerate_cell_is(vg.intra_adjacency(cell), cap)?;
        let back = vg.back_conflicts(cell);
        let weights = masks
            .iter()
            .map(|&mask| {
                let mut w = 0.0;
                let mut bits = mask;
                while bits != 0 {
                    let local = bits.trailing_zeros() as usize;
                    w += u[members[local]];
                    bits &= bits - 1;
                }
                w
            })
            .collect();
        let back_union = masks
            .iter()
            .map(|&mask| {
                let mut acc = 0u32;
                let mut bits = mask;
                while bits != 0 {
                    let local = bits.trailing_zeros() as usize;
                    acc |= back[local];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        per_cell.push(CellCatalog {
            masks,
            weights,
            back_union,
        });
    }
    Ok(Catalogs {
        per_cell,
        total_weight,
    })
}

/// Compatibility relation between the catalogs of cells `n` and `n+1`:
/// `(k, l)` is in the relation when the union of catalog entry `k` of cell
/// `n` and entry `l` of cell `n+1` is independent in the induced pair graph.
#[derive(Debug, Clone)]
pub struct CompatibilityRelation {
    left_masks: Vec<u32>,
    right_back_union: Vec<u32>,
}

impl CompatibilityRelation {
    pub fn new(catalogs: &Catalogs, n: usize) -> Self {
        CompatibilityRelation {
            left_masks: catalogs.per_cell[n].masks.clone(),
            right_back_union: catalogs.per_cell[n + 1].back_union.clone(),
        }
    }

    pub fn contains(&self, k: usize, l: usize) -> bool {
        self.left_masks[k] & self.right_back_union[l] == 0
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.left_masks.len() {
            for l in 0..self.right_back_union.len() {
                if self.contains(k, l) {
                    out.push((k, l));
                }
            }
        }
        out
    }
}

/// Per-cell admissible catalog entries; `None` leaves a cell unconstrained.
#[derive(Debug, Clone)]
pub struct ConstraintSets {
    admissible: Vec<Option<Vec<bool>>>,
}

impl ConstraintSets {
    pub fn unconstrained(cells: usize) -> Self {
        ConstraintSets {
            admissible: vec![None; cells],
        }
    }

    /// Restricts cell `n` to the catalog entries flagged true.
    pub fn restrict(&mut self, cell: usize, allowed: Vec<bool>) {
        self.admissible[cell] = Some(allowed);
    }

    pub fn is_admissible(&self, cell: usize, state: usize) -> bool {
        match &self.admissible[cell] {
            None => true,
            Some(flags) => flags[state],
        }
    }

    pub fn cell_count(&self) -> usize {
        self.admissible.len()
    }

    /// Admissible catalog entries of one cell, as masks (test convenience).
    pub fn admissible_masks(&self, catalogs: &Catalogs, cell: usize) -> Vec<u32> {
        catalogs.per_cell[cell]
            .masks
            .iter()
            .enumerate()
            .filter(|&(k, _)| self.is_admissible(cell, k))
            .map(|(_, &m)| m)
            .collect()
    }
}

/// An exact MWIS of a vector graph.
#[derive(Debug, Clone)]
pub struct MwisSolution {
    /// Chosen vertices by original id, ascending.
    pub vertices: Vec<usize>,
    /// Total weight of the chosen set.
    pub weight: f64,
    /// Normalized weighted cardinality: weight over the graph's total weight
    /// (0 when the total vanishes).
    pub nwc: f64,
    /// Predecessor-state pairs examined by the Bellman scans.
    pub transitions: u64,
    /// Largest per-cell catalog encountered.
    pub max_catalog: usize,
}

/// Exact MWIS over a vector graph by dynamic programming, restricted to
/// selections whose per-cell sets are admissible under `constraints`.
///
/// Ties break toward the smallest predecessor state and, at the end, the
/// smallest final state, so results are deterministic. Errors only when every
/// admissible state of some cell is unreachable, which cannot happen while
/// the empty set stays admissible everywhere.
pub fn solve_mwis_1d(
    vg: &VectorGraph,
    u: &[f64],
    constraints: &ConstraintSets,
) -> Result<MwisSolution> {
    assert_eq!(
        constraints.cell_count(),
        vg.cell_count(),
        "constraint sets must align with cells"
    );
    let catalogs = build_catalogs(vg, u, DEFAULT_CELL_CAP)?;
    solve_with_catalogs(vg, &catalogs, constraints)
}

/// [`solve_mwis_1d`] against pre-built catalogs.
pub fn solve_with_catalogs(
    vg: &VectorGraph,
    catalogs: &Catalogs,
    constraints: &ConstraintSets,
) -> Result<MwisSolution> {
    let n_cells = vg.cell_count();
    if n_cells == 0 {
        return Ok(MwisSolution {
            vertices: Vec::new(),
            weight: 0.0,
            nwc: 0.0,
            transitions: 0,
            max_catalog: 0,
        });
    }

    let mut transitions = 0u64;
    // dp[n][k] = best accumulated weight ending in state k, with predecessor.
    let mut dp: Vec<Vec<Option<(f64, usize)>>> = Vec::with_capacity(n_cells);

    let first: Vec<Option<(f64, usize)>> = catalogs.per_cell[0]
        .weights
        .iter()
        .enumerate()
        .map(|(k, &w)| constraints.is_admissible(0, k).then_some((w, usize::MAX)))
        .collect();
    if first.iter().all(Option::is_none) {
        return Err(Error::Infeasible { cell: 0 });
    }
    dp.push(first);

    for n in 1..n_cells {
        let prev_cat = &catalogs.per_cell[n - 1];
        let cat = &catalogs.per_cell[n];
        let prev_dp = &dp[n - 1];
        let mut layer: Vec<Option<(f64, usize)>> = vec![None; cat.masks.len()];
        for (k, slot) in layer.iter_mut().enumerate() {
            if !constraints.is_admissible(n, k) {
                continue;
            }
            let clash = cat.back_union[k];
            let mut best: Option<(f64, usize)> = None;
            for (l, prev) in prev_dp.iter().enumerate() {
                transitions += 1;
                let Some((acc, _)) = prev else { continue };
                if prev_cat.masks[l] & clash != 0 {
                    continue;
                }
                // Strict improvement keeps the smallest predecessor on ties.
                if best.is_none() || *acc > best.unwrap().0 {
                    best = Some((*acc, l));
                }
            }
            *slot = best.map(|(acc, l)| (acc + cat.weights[k], l));
        }
        if layer.iter().all(Option::is_none) {
            return Err(Error::Infeasible { cell: n });
        }
        dp.push(layer);
    }

    // Best final state; smallest index on ties.
    let (mut state, mut best) = (usize::MAX, f64::NEG_INFINITY);
    for (k, slot) in dp[n_cells - 1].iter().enumerate() {
        if let Some((acc, _)) = slot {
            if *acc > best {
                best = *acc;
                state = k;
            }
        }
    }
    debug_assert_ne!(state, usize::MAX);

    let mut vertices = Vec::new();
    let mut k = state;
    for n in (0..n_cells).rev() {
        let mask = catalogs.per_cell[n].masks[k];
        let members = &vg.cells()[n];
        let mut bits = mask;
        while bits != 0 {
            let local = bits.trailing_zeros() as usize;
            vertices.push(members[local]);
            bits &= bits - 1;
        }
        k = dp[n][k].expect("backtrack follows feasible states").1;
    }
    vertices.sort_unstable();

    let nwc = if catalogs.total_weight > 0.0 {
        best / catalogs.total_weight
    } else {
        0.0
    };
    Ok(MwisSolution {
        vertices,
        weight: best,
        nwc,
        transitions,
        max_catalog: catalogs.max_catalog(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    /// Exhaustive DFS over all vertex subsets (include/exclude per vertex,
    /// conflict-pruned), independent of the DP path. Returns the best weight
    /// among subsets that are independent and, when `constraints` is given,
    /// whose per-cell restriction appears in the admissible mask list.
    fn brute_force(vg: &VectorGraph, u: &[f64], admissible: Option<&Vec<Vec<u32>>>) -> f64 {
        let ids: Vec<usize> = vg.cells().iter().flatten().copied().collect();
        let n = ids.len();
        let pos: std::collections::HashMap<usize, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // Global adjacency over the flattened ordering.
        let mut adj = vec![0u64; n];
        for c in 0..vg.cell_count() {
            let members = &vg.cells()[c];
            for (l, &v) in members.iter().enumerate() {
                let gi = pos[&v];
                let mask = vg.intra_adjacency(c)[l];
                let mut bits = mask;
                while bits != 0 {
                    let other = members[bits.trailing_zeros() as usize];
                    adj[gi] |= 1 << pos[&other];
                    bits &= bits - 1;
                }
                if c > 0 {
                    let mut back = vg.back_conflicts(c)[l];
                    while back != 0 {
                        let other = vg.cells()[c - 1][back.trailing_zeros() as usize];
                        adj[gi] |= 1 << pos[&other];
                        adj[pos[&other]] |= 1 << gi;
                        back &= back - 1;
                    }
                }
            }
        }
        let mut best = f64::NEG_INFINITY;
        let mut stack = vec![(0usize, 0u64, 0.0f64)];
        while let Some((idx, chosen, weight)) = stack.pop() {
            if idx == n {
                if subset_admissible(vg, &pos, chosen, admissible) && weight > best {
                    best = weight;
                }
                continue;
            }
            stack.push((idx + 1, chosen, weight));
            if adj[idx] & chosen == 0 {
                stack.push((idx + 1, chosen | (1 << idx), weight + u[ids[idx]]));
            }
        }
        best
    }

    fn subset_admissible(
        vg: &VectorGraph,
        pos: &std::collections::HashMap<usize, usize>,
        chosen: u64,
        admissible: Option<&Vec<Vec<u32>>>,
    ) -> bool {
        let Some(allowed) = admissible else {
            return true;
        };
        for c in 0..vg.cell_count() {
            let mut cell_mask = 0u32;
            for (l, &v) in vg.cells()[c].iter().enumerate() {
                if chosen >> pos[&v] & 1 == 1 {
                    cell_mask |= 1 << l;
                }
            }
            if !allowed[c].contains(&cell_mask) {
                return false;
            }
        }
        true
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_cell_is(&[], DEFAULT_CELL_CAP).unwrap(), vec![0]);
        // K3: adjacency masks all-pairs.
        let k3 = [0b110, 0b101, 0b011];
        let sets = enumerate_cell_is(&k3, DEFAULT_CELL_CAP).unwrap();
        assert_eq!(sets.len(), 4);
        assert_eq!(sets[0], 0);
        // Two free vertices: the power set.
        let free = [0, 0];
        assert_eq!(enumerate_cell_is(&free, DEFAULT_CELL_CAP).unwrap().len(), 4);
    }

    #[test]
    fn enumerate_rejects_oversized_cell() {
        let adj = vec![0u32; DEFAULT_CELL_CAP + 1];
        assert!(matches!(
            enumerate_cell_is(&adj, DEFAULT_CELL_CAP),
            Err(Error::CellTooLarge { size: 21, cap: 20 })
        ));
    }

    #[test]
    fn path_of_three_picks_middle() {
        // Single-vertex cells 0-1-2 with consecutive edges; weights 1, 3, 1.
        let vg =
            VectorGraph::from_parts(vec![vec![0], vec![1], vec![2]], &[(0, 1), (1, 2)]).unwrap();
        let u = [1.0, 3.0, 1.0];
        let unconstrained = ConstraintSets::unconstrained(3);
        let sol = solve_mwis_1d(&vg, &u, &unconstrained).unwrap();
        assert_eq!(brute_force(&vg, &u, None), 3.0);
        assert_eq!(sol.weight, 3.0);
        assert_eq!(sol.vertices, vec![1]);
    }

    #[test]
    fn four_vertex_example_with_and_without_constraints() {
        // Cells {a}, {b, c with edge}, {d}; inter edges a-b and c-d.
        // ids: a=0, b=1, c=2, d=3; weights 2, 3, 4, 2.
        let vg = VectorGraph::from_parts(
            vec![vec![0], vec![1, 2], vec![3]],
            &[(1, 2), (0, 1), (2, 3)],
        )
        .unwrap();
        let u = [2.0, 3.0, 4.0, 2.0];
        let free = ConstraintSets::unconstrained(3);
        let sol = solve_mwis_1d(&vg, &u, &free).unwrap();
        assert_eq!(brute_force(&vg, &u, None), 6.0);
        assert_eq!(sol.weight, 6.0);
        assert_eq!(sol.vertices, vec![0, 2]);
        assert!((sol.nwc - 6.0 / 11.0).abs() < 1e-15);

        // Forcing cell 2 (index 1) to the empty set flips the answer to {a, d}.
        let catalogs = build_catalogs(&vg, &u, DEFAULT_CELL_CAP).unwrap();
        let mut constrained = ConstraintSets::unconstrained(3);
        constrained.restrict(
            1,
            catalogs.per_cell[1].masks.iter().map(|&m| m == 0).collect(),
        );
        let sol2 = solve_mwis_1d(&vg, &u, &constrained).unwrap();
        let admissible = vec![
            catalogs.per_cell[0].masks.clone(),
            vec![0u32],
            catalogs.per_cell[2].masks.clone(),
        ];
        assert_eq!(brute_force(&vg, &u, Some(&admissible)), 4.0);
        assert_eq!(sol2.weight, 4.0);
        assert_eq!(sol2.vertices, vec![0, 3]);
    }

    #[test]
    fn infeasible_when_every_state_excluded() {
        let vg = VectorGraph::from_parts(vec![vec![0]], &[]).unwrap();
        let mut constraints = ConstraintSets::unconstrained(1);
        constraints.restrict(0, vec![false, false]);
        assert!(matches!(
            solve_mwis_1d(&vg, &[1.0], &constraints),
            Err(Error::Infeasible { cell: 0 })
        ));
    }

    fn random_vector_graph(rng: &mut ChaCha12Rng, max_cells: usize) -> (VectorGraph, Vec<f64>) {
        let cols = rng.random_range(1..=max_cells);
        let edge_prob = rng.random_range(0.2..0.8);
        let g = crate::synth::random_matrix_graph(rng, 1, cols, 3, edge_prob);
        let vg = stack_rows(&g, &[1], None).unwrap();
        let u: Vec<f64> = (0..g.vertex_count())
            .map(|_| rng.random_range(0..=9) as f64)
            .collect();
        (vg, u)
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha12Rng::seed_from_u64(2024);
        for _ in 0..120 {
            let (vg, u) = random_vector_graph(&mut rng, 8);
            let free = ConstraintSets::unconstrained(vg.cell_count());
            let sol = solve_mwis_1d(&vg, &u, &free).unwrap();
            let expect = brute_force(&vg, &u, None);
            assert_eq!(sol.weight, expect, "weights are integer-valued");
            // The witness must be an independent set of the claimed weight.
            let total: f64 = sol.vertices.iter().map(|&v| u[v]).sum();
            assert_eq!(total, sol.weight);
        }
    }

    #[test]
    fn matches_brute_force_under_random_constraints() {
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        let mut nontrivial = 0;
        for _ in 0..80 {
            let (vg, u) = random_vector_graph(&mut rng, 6);
            let catalogs = build_catalogs(&vg, &u, DEFAULT_CELL_CAP).unwrap();
            let mut constraints = ConstraintSets::unconstrained(vg.cell_count());
            let mut admissible_masks = Vec::new();
            for c in 0..vg.cell_count() {
                let cat = &catalogs.per_cell[c];
                // Keep the empty set, drop other entries at random.
                let flags: Vec<bool> = cat
                    .masks
                    .iter()
                    .map(|&m| m == 0 || rng.random::<f64>() < 0.6)
                    .collect();
                admissible_masks.push(
                    cat.masks
                        .iter()
                        .zip(&flags)
                        .filter(|&(_, &f)| f)
                        .map(|(&m, _)| m)
                        .collect::<Vec<_>>(),
                );
                if flags.iter().any(|f| !f) {
                    nontrivial += 1;
                }
                constraints.restrict(c, flags);
            }
            let sol = solve_mwis_1d(&vg, &u, &constraints).unwrap();
            let expect = brute_force(&vg, &u, Some(&admissible_masks));
            assert_eq!(sol.weight, expect);
        }
        assert!(
            nontrivial > 0,
            "constraint suite never constrained anything"
        );
    }

    #[test]
    fn adding_edges_never_helps_removing_constraints_never_hurts() {
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..60 {
            // Two single-row graphs differing by extra edges.
            let n = rng.random_range(2..=6);
            let sparse = crate::synth::random_matrix_graph(&mut rng, 1, n, 3, 0.3);
            let u: Vec<f64> = (0..sparse.vertex_count())
                .map(|_| rng.random_range(0..=9) as f64)
                .collect();
            let mut extra = sparse.edges().to_vec();
            for a in 0..sparse.vertex_count() {
                for b in (a + 1)..sparse.vertex_count() {
                    let (ra, rb) = (sparse.vertex_ref(a), sparse.vertex_ref(b));
                    if ra.n.abs_diff(rb.n) <= 1 && rng.random::<f64>() < 0.2 {
                        extra.push((a, b));
                    }
                }
            }
            let dense = MatrixGraph::new(
                1,
                n,
                (1..=n).map(|c| sparse.cell_size(1, c)).collect(),
                extra,
            )
            .unwrap();
            let vg_sparse = stack_rows(&sparse, &[1], None).unwrap();
            let vg_dense = stack_rows(&dense, &[1], None).unwrap();
            let free_s = ConstraintSets::unconstrained(vg_sparse.cell_count());
            let free_d = ConstraintSets::unconstrained(vg_dense.cell_count());
            let w_sparse = solve_mwis_1d(&vg_sparse, &u, &free_s).unwrap().weight;
            let w_dense = solve_mwis_1d(&vg_dense, &u, &free_d).unwrap().weight;
            assert!(w_dense <= w_sparse);

            // Constrained vs unconstrained on the sparse graph.
            let catalogs = build_catalogs(&vg_sparse, &u, DEFAULT_CELL_CAP).unwrap();
            let mut constraints = ConstraintSets::unconstrained(vg_sparse.cell_count());
            for c in 0..vg_sparse.cell_count() {
                let flags: Vec<bool> = catalogs.per_cell[c]
                    .masks
                    .iter()
                    .map(|&m| m == 0 || rng.random::<f64>() < 0.5)
                    .collect();
                constraints.restrict(c, flags);
            }
            let w_constrained = solve_mwis_1d(&vg_sparse, &u, &constraints).unwrap().weight;
            assert!(w_constrained <= w_sparse);
        }
    }

    #[test]
    fn zero_weight_vertices_can_be_pruned() {
        let mut rng = ChaCha12Rng::seed_from_u64(5005);
        for _ in 0..60 {
            let g = crate::synth::random_matrix_graph(&mut rng, 1, 5, 3, 0.5);
            let u: Vec<f64> = (0..g.vertex_count())
                .map(|_| {
                    if rng.random::<f64>() < 0.4 {
                        0.0
                    } else {
                        rng.random_range(1..=9) as f64
                    }
                })
                .collect();
            let full = stack_rows(&g, &[1], None).unwrap();
            let pruned = stack_rows_filtered(&g, &[1], None, &|v| u[v] > 0.0).unwrap();
            let w_full =
                solve_mwis_1d(&full, &u, &ConstraintSets::unconstrained(full.cell_count()))
                    .unwrap()
                    .weight;
            let w_pruned = solve_mwis_1d(
                &pruned,
                &u,
                &ConstraintSets::unconstrained(pruned.cell_count()),
            )
            .unwrap()
            .weight;
            assert_eq!(w_full, w_pruned);
        }
    }

    #[test]
    fn transition_count_stays_within_k_squared_n() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..40 {
            let (vg, u) = random_vector_graph(&mut rng, 8);
            let free = ConstraintSets::unconstrained(vg.cell_count());
            let sol = solve_mwis_1d(&vg, &u, &free).unwrap();
            let k = sol.max_catalog as u64;
            let n = vg.cell_count() as u64;
            assert!(sol.transitions <= k * k * n);
        }
    }

    #[test]
    fn compatibility_relation_matches_pair_graph() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let (vg, u) = random_vector_graph(&mut rng, 4);
        let catalogs = build_catalogs(&vg, &u, DEFAULT_CELL_CAP).unwrap();
        for n in 0..vg.cell_count().saturating_sub(1) {
            let rel = CompatibilityRelation::new(&catalogs, n);
            for (k, &mask_k) in catalogs.per_cell[n].masks.iter().enumerate() {
                for (l, &mask_l) in catalogs.per_cell[n + 1].masks.iter().enumerate() {
                    // Direct check: any cross edge between members?
                    let mut clash = false;
                    let mut bits = mask_l;
                    while bits != 0 {
                        let local = bits.trailing_zeros() as usize;
                        if vg.back_conflicts(n + 1)[local] & mask_k != 0 {
                            clash = true;
                        }
                        bits &= bits - 1;
                    }
                    assert_eq!(rel.contains(k, l), !clash);
                }
            }
        }
    }

    #[test]
    fn stack_single_row_is_identity() {
        let mut rng = ChaCha12Rng::seed_from_u64(14);
        let g = crate::synth::random_matrix_graph(&mut rng, 3, 5, 3, 0.5);
        let vg = stack_rows(&g, &[2], None).unwrap();
        assert_eq!(vg.cell_count(), 5);
        for (idx, n) in (1..=5).enumerate() {
            let expect: Vec<usize> = g.cell_vertices(2, n).collect();
            assert_eq!(vg.cells()[idx], expect);
        }
        // Every intra/adjacent edge of row 2 must appear, and nothing else.
        let mut expected = 0;
        for &(a, b) in g.edges() {
            let (ra, rb) = (g.vertex_ref(a), g.vertex_ref(b));
            if ra.m == 2 && rb.m == 2 {
                expected += 1;
            }
        }
        let mut got = 0;
        for c in 0..vg.cell_count() {
            got += vg
                .intra_adjacency(c)
                .iter()
                .map(|m| m.count_ones() as usize)
                .sum::<usize>()
                / 2;
            got += vg
                .back_conflicts(c)
                .iter()
                .map(|m| m.count_ones() as usize)
                .sum::<usize>();
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn stack_adjacent_rows_keeps_diagonal_edges() {
        // 4x3 grid, one vertex per cell; edge between (2,1) and (3,2).
        let mut cell_len = vec![1; 12];
        cell_len[0] = 1;
        let g = MatrixGraph::new(4, 3, cell_len, vec![(3, 7)]).unwrap();
        let vg = stack_rows(&g, &[2, 3], None).unwrap();
        // Vertices 3 (row 2, col 1) and 7 (row 3, col 2) sit in big cells 0 and 1.
        assert_eq!(vg.cells()[0], vec![3, 6]);
        assert_eq!(vg.cells()[1], vec![4, 7]);
        assert_eq!(vg.back_conflicts(1), &[0b00, 0b01]);
    }

    #[test]
    fn wrapped_row_pair_stays_disconnected() {
        // M=10 single-vertex cells, edges only between consecutive rows.
        let mut edges = Vec::new();
        for m in 0..9usize {
            edges.push((m * 2, (m + 1) * 2)); // col 1 chain
            edges.push((m * 2 + 1, (m + 1) * 2 + 1)); // col 2 chain
        }
        let g = MatrixGraph::new(10, 2, vec![1; 20], edges).unwrap();
        let vg = stack_rows(&g, &[10, 1], None).unwrap();
        // Rows 10 and 1 are not adjacent: no intra edges inside the stacks.
        for c in 0..vg.cell_count() {
            assert!(vg.intra_adjacency(c).iter().all(|&m| m == 0));
        }
    }

    #[test]
    fn stack_rejects_bad_subsets() {
        let g = MatrixGraph::new(3, 2, vec![1; 6], vec![]).unwrap();
        assert!(stack_rows(&g, &[], None).is_err());
        assert!(stack_rows(&g, &[4], None).is_err());
        assert!(stack_rows(&g, &[2, 2], None).is_err());
        assert!(stack_rows(&g, &[1], Some((2, 1))).is_err());
    }

    #[test]
    fn column_range_restricts_cells() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let g = crate::synth::random_matrix_graph(&mut rng, 2, 6, 2, 0.4);
        let vg = stack_rows(&g, &[1, 2], Some((2, 4))).unwrap();
        assert_eq!(vg.cell_count(), 3);
        let expect: Vec<usize> = g.cell_vertices(1, 3).chain(g.cell_vertices(2, 3)).collect();
        assert_eq!(vg.cells()[1], expect);
    }
}
