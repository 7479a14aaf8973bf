//! Exact solvers for desk-scale instances.
//!
//! Two independent routes compute the maximum-weight independent set of a
//! matrix graph: a pruned subset enumeration (at most 26 vertices) and a
//! full-stack column DP that treats each column as one big cell of a vector
//! graph. Agreement between the two is a standing test invariant; the solver's
//! exact mode shares the stacked route, so identity checks against the oracle
//! compare bit-for-bit.

use crate::error::{Error, Result};
use crate::matrix_graph::{reuse_ratio, Coloring, MatrixGraph, WeightAssignment};
use crate::vector_dp::{self, ConstraintSets};

/// Hard cap for the subset-enumeration route.
pub const ENUMERATION_VERTEX_CAP: usize = 26;

/// An exact MWIS witness with its value and search effort.
#[derive(Debug, Clone)]
pub struct OracleMwis {
    pub vertices: Vec<usize>,
    pub weight: f64,
    /// Weight over the total vertex weight (0 when the total vanishes).
    pub nwc: f64,
    /// Enumeration nodes visited or DP transitions performed.
    pub nodes: u64,
}

/// Exact MWIS by depth-first subset enumeration with conflict and
/// remaining-weight pruning. Refuses instances above
/// [`ENUMERATION_VERTEX_CAP`] vertices.
pub fn exact_mwis_enumeration(graph: &MatrixGraph, u: &[f64]) -> Result<OracleMwis> {
    let n = graph.vertex_count();
    assert_eq!(n, u.len());
    if n > ENUMERATION_VERTEX_CAP {
        return Err(Error::TooLargeForExact(format!(
            "{n} vertices exceed the {ENUMERATION_VERTEX_CAP}-vertex enumeration cap"
        )));
    }
    let mut adj = vec![0u64; n];
    for &(a, b) in graph.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    // suffix[i] = weight still available from vertex i on.
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + u[i];
    }

    let mut nodes = 0u64;
    let mut best = f64::NEG_INFINITY;
    let mut best_set = 0u64;
    let mut stack: Vec<(usize, u64, f64)> = vec![(0, 0, 0.0)];
    while let Some((idx, chosen, weight)) = stack.pop() {
        nodes += 1;
        if weight + suffix[idx] <= best {
            continue;
        }
        if idx == n {
            if weight > best {
                best = weight;
                best_set = chosen;
            }
            continue;
        }
        // Explore inclusion last so it pops first: heavy sets early tighten
        // the bound.
        stack.push((idx + 1, chosen, weight));
        if adj[idx] & chosen == 0 {
            stack.push((idx + 1, chosen | (1 << idx), weight + u[idx]));
        }
    }

    let vertices: Vec<usize> = (0..n).filter(|&v| best_set >> v & 1 == 1).collect();
    let total: f64 = u.iter().sum();
    Ok(OracleMwis {
        weight: best,
        nwc: if total > 0.0 { best / total } else { 0.0 },
        vertices,
        nodes,
    })
}

/// Exact MWIS by the full-stack column DP: all M rows form one big cell per
/// column. Zero-weight vertices are left out of the catalogs (they cannot
/// change the optimum). Errors when a stacked column exceeds the catalog cap.
pub fn exact_mwis_stacked(graph: &MatrixGraph, u: &[f64]) -> Result<OracleMwis> {
    assert_eq!(graph.vertex_count(), u.len());
    let rows: Vec<usize> = (1..=graph.rows()).collect();
    let vg = vector_dp::stack_rows_filtered(graph, &rows, None, &|v| u[v] > 0.0)?;
    let sol = vector_dp::solve_mwis_1d(&vg, u, &ConstraintSets::unconstrained(vg.cell_count()))?;
    // The stacked graph drops zero-weight vertices, but they contribute
    // nothing to the NWC denominator either; recompute against the full total.
    let total: f64 = u.iter().sum();
    Ok(OracleMwis {
        weight: sol.weight,
        nwc: if total > 0.0 { sol.weight / total } else { 0.0 },
        vertices: sol.vertices,
        nodes: sol.transitions,
    })
}

/// Exact MWIS dispatcher: the stacked DP when the columns fit the catalog
/// cap, subset enumeration as fallback, otherwise an explicit size error.
pub fn exact_mwis(graph: &MatrixGraph, u: &[f64]) -> Result<OracleMwis> {
    match exact_mwis_stacked(graph, u) {
        Ok(sol) => Ok(sol),
        Err(Error::CellTooLarge { .. }) => match exact_mwis_enumeration(graph, u) {
            Ok(sol) => Ok(sol),
            Err(Error::TooLargeForExact(msg)) => Err(Error::TooLargeForExact(format!(
                "stacked columns exceed the catalog cap and {msg}"
            ))),
            Err(e) => Err(e),
        },
        Err(e) => Err(e),
    }
}

/// Exact multi-coloring result.
#[derive(Debug, Clone)]
pub struct OracleMgc {
    pub coloring: Coloring,
    /// The optimal weighted reuse ratio.
    pub fbar: f64,
    /// Optimal per-color normalized weighted cardinalities B_c*.
    pub per_color_nwc: Vec<f64>,
    pub nodes: u64,
}

/// Exact multi-coloring: colors decouple, so each color's class is an exact
/// MWIS under `u = w * mu(., c)`; the reuse ratio follows from the assembled
/// coloring.
pub fn exact_mgc(graph: &MatrixGraph, weights: &WeightAssignment) -> Result<OracleMgc> {
    assert_eq!(graph.vertex_count(), weights.vertex_count());
    let colors = weights.colors();
    let mut coloring = Coloring::empty(graph.vertex_count(), colors);
    let mut per_color_nwc = Vec::with_capacity(colors);
    let mut nodes = 0u64;
    for c in 1..=colors {
        let u = weights.color_weights(c);
        let sol = exact_mwis(graph, &u)?;
        for &v in &sol.vertices {
            coloring.set(v, c, true);
        }
        per_color_nwc.push(sol.nwc);
        nodes += sol.nodes;
    }
    let fbar = reuse_ratio(&coloring, weights);
    Ok(OracleMgc {
        coloring,
        fbar,
        per_color_nwc,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn edgeless_takes_everything() {
        let g = MatrixGraph::new(2, 2, vec![1, 2, 1, 0], vec![]).unwrap();
        let u = vec![1.0; 4];
        for sol in [
            exact_mwis_enumeration(&g, &u).unwrap(),
            exact_mwis_stacked(&g, &u).unwrap(),
        ] {
            assert_eq!(sol.vertices, vec![0, 1, 2, 3]);
            assert_eq!(sol.nwc, 1.0);
        }
    }

    #[test]
    fn complete_cell_takes_heaviest() {
        let g = MatrixGraph::new(1, 1, vec![3], vec![(0, 1), (0, 2), (1, 2)]).unwrap();
        let u = vec![1.0, 5.0, 2.0];
        for sol in [
            exact_mwis_enumeration(&g, &u).unwrap(),
            exact_mwis_stacked(&g, &u).unwrap(),
        ] {
            assert_eq!(sol.vertices, vec![1]);
            assert_eq!(sol.weight, 5.0);
        }
    }

    #[test]
    fn king_grid_three_by_three() {
        // 3x3 grid, one vertex per cell, all lattice + diagonal edges.
        let mut edges = Vec::new();
        for a in 0..9usize {
            let (ma, na) = (a / 3, a % 3);
            for b in (a + 1)..9 {
                let (mb, nb) = (b / 3, b % 3);
                if ma.abs_diff(mb) <= 1 && na.abs_diff(nb) <= 1 {
                    edges.push((a, b));
                }
            }
        }
        let g = MatrixGraph::new(3, 3, vec![1; 9], edges).unwrap();
        let u = vec![1.0; 9];
        let sol = exact_mwis_enumeration(&g, &u).unwrap();
        assert_eq!(sol.weight, 4.0);
        assert_eq!(sol.vertices, vec![0, 2, 6, 8], "the four corners");
        let dp = exact_mwis_stacked(&g, &u).unwrap();
        assert_eq!(dp.weight, 4.0);
    }

    #[test]
    fn enumeration_rejects_large_instances() {
        let g = MatrixGraph::new(3, 3, vec![3; 9], vec![]).unwrap();
        assert!(matches!(
            exact_mwis_enumeration(&g, &vec![1.0; 27]),
            Err(Error::TooLargeForExact(_))
        ));
    }

    #[test]
    fn dispatcher_falls_back_to_enumeration() {
        // One 21-vertex column overflows the stacked catalog cap, but the
        // whole graph still fits the enumeration route.
        let g = MatrixGraph::new(7, 1, vec![3; 7], vec![(0, 1), (3, 4), (6, 8)]).unwrap();
        let u = vec![1.0; 21];
        assert!(matches!(
            exact_mwis_stacked(&g, &u),
            Err(Error::CellTooLarge { .. })
        ));
        let sol = exact_mwis(&g, &u).unwrap();
        assert_eq!(sol.weight, 18.0, "three edges each cost one vertex");

        // Nothing fits: explicit size error.
        let big = MatrixGraph::new(7, 1, vec![4; 7], vec![]).unwrap();
        assert!(matches!(
            exact_mwis(&big, &vec![1.0; 28]),
            Err(Error::TooLargeForExact(_))
        ));
    }

    #[test]
    fn dual_methods_agree_on_random_instances() {
        let mut rng = ChaCha12Rng::seed_from_u64(404);
        for round in 0..80 {
            let g = crate::synth::random_matrix_graph(&mut rng, 3, 3, 2, 0.5);
            if g.vertex_count() > ENUMERATION_VERTEX_CAP {
                continue;
            }
            let u: Vec<f64> = (0..g.vertex_count())
                .map(|_| rng.random_range(0..=9) as f64)
                .collect();
            let a = exact_mwis_enumeration(&g, &u).unwrap();
            let b = exact_mwis_stacked(&g, &u).unwrap();
            assert_eq!(a.weight, b.weight, "round {round}");
        }
    }

    #[test]
    fn mgc_examples() {
        // Edgeless, unit weights: everything gets every color.
        let g = MatrixGraph::new(1, 2, vec![1, 1], vec![]).unwrap();
        let w = WeightAssignment::uniform(2, 3);
        let r = exact_mgc(&g, &w).unwrap();
        assert_eq!(r.fbar, 1.0);

        // K2 in one cell, two colors: half the band each at best.
        let k2 = MatrixGraph::new(1, 1, vec![2], vec![(0, 1)]).unwrap();
        let w2 = WeightAssignment::uniform(2, 2);
        let r2 = exact_mgc(&k2, &w2).unwrap();
        assert_eq!(r2.fbar, 0.5);
        assert_eq!(r2.per_color_nwc, vec![0.5, 0.5]);
    }
}
