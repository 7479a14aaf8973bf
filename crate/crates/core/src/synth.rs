//! Seeded random instance builders for verification suites and benches.
//!
//! These sample matrix graphs directly (cell sizes and edge coin-flips) rather
//! than through the spatial pipeline, so suites can pin exact cell occupancy
//! bounds.

use rand::Rng;

use crate::matrix_graph::{MatrixGraph, WeightAssignment};

/// Random matrix graph: every cell holds 0..=`max_cell` vertices (uniform),
/// and every lattice-legal vertex pair carries an edge with probability
/// `edge_prob`.
pub fn random_matrix_graph<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    max_cell: usize,
    edge_prob: f64,
) -> MatrixGraph {
    let cell_len: Vec<usize> = (0..rows * cols)
        .map(|_| rng.random_range(0..=max_cell))
        .collect();
    let skeleton = MatrixGraph::new(rows, cols, cell_len.clone(), Vec::new())
        .expect("skeleton is structurally valid");
    let mut edges = Vec::new();
    for m1 in 1..=rows {
        for n1 in 1..=cols {
            for u in skeleton.cell_vertices(m1, n1) {
                // Same cell plus forward 8-neighbors; backward pairs were
                // already visited.
                for (m2, n2) in neighbor_cells_forward(m1, n1, rows, cols) {
                    for v in skeleton.cell_vertices(m2, n2) {
                        if (m2, n2) == (m1, n1) && v <= u {
                            continue;
                        }
                        if rng.random::<f64>() < edge_prob {
                            edges.push((u, v));
                        }
                    }
                }
            }
        }
    }
    MatrixGraph::new(rows, cols, cell_len, edges).expect("sampled edges are lattice-legal")
}

fn neighbor_cells_forward(m: usize, n: usize, rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(m, n)];
    // (m, n+1), (m+1, n-1), (m+1, n), (m+1, n+1)
    if n < cols {
        out.push((m, n + 1));
    }
    if m < rows {
        if n > 1 {
            out.push((m + 1, n - 1));
        }
        out.push((m + 1, n));
        if n < cols {
            out.push((m + 1, n + 1));
        }
    }
    out
}

/// Integer-valued random weights: `w` uniform in 1..=w_max, `mu` Bernoulli
/// {0,1} with the given probability. Integer values keep weight sums exact in
/// f64, so equality assertions against oracles stay meaningful.
pub fn random_weights<R: Rng>(
    rng: &mut R,
    vertices: usize,
    colors: usize,
    w_max: u32,
    mu_prob: f64,
) -> WeightAssignment {
    let w: Vec<f64> = (0..vertices)
        .map(|_| rng.random_range(1..=w_max) as f64)
        .collect();
    let mu: Vec<f64> = (0..vertices * colors)
        .map(|_| {
            if rng.random::<f64>() < mu_prob {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    WeightAssignment::new(w, mu, colors).expect("sampled weights are valid")
}
