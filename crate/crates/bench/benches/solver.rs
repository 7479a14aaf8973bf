use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::hint::black_box;

use mgc_core::solver::{solve_mgc, SolveConfig};
use mgc_core::synth;
use mgc_core::vector_dp::{solve_mwis_1d, stack_rows, ConstraintSets};
use mgc_core::WeightAssignment;

/// Solve scaling over the graph length at fixed M, L, C; expected roughly
/// linear in N.
fn bench_solve_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_mgc_scaling");
    for n in [25usize, 50, 100] {
        let mut rng = ChaCha12Rng::seed_from_u64(7_000 + n as u64);
        let g = synth::random_matrix_graph(&mut rng, 8, n, 3, 0.6);
        let w = WeightAssignment::uniform(g.vertex_count(), 3);
        let cfg = SolveConfig::floor(3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| black_box(solve_mgc(&g, &w, &cfg).unwrap()))
        });
    }
    group.finish();
}

/// Floor-height sweep: the exponential K^(L-1) catalog cost.
fn bench_floor_height(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_mgc_floor_height");
    let mut rng = ChaCha12Rng::seed_from_u64(8_100);
    let g = synth::random_matrix_graph(&mut rng, 10, 40, 3, 0.6);
    let w = WeightAssignment::uniform(g.vertex_count(), 3);
    for l in [2usize, 3, 4, 5] {
        let cfg = SolveConfig::floor(l);
        group.bench_with_input(BenchmarkId::from_parameter(l), &l, |b, _| {
            b.iter(|| black_box(solve_mgc(&g, &w, &cfg).unwrap()))
        });
    }
    group.finish();
}

/// Raw 1-D DP throughput on a long vector graph.
fn bench_vector_dp(c: &mut Criterion) {
    let mut rng = ChaCha12Rng::seed_from_u64(9_200);
    let g = synth::random_matrix_graph(&mut rng, 1, 400, 3, 0.5);
    let vg = stack_rows(&g, &[1], None).unwrap();
    let u = vec![1.0; g.vertex_count()];
    let free = ConstraintSets::unconstrained(vg.cell_count());
    c.bench_function("solve_mwis_1d_n400", |b| {
        b.iter(|| black_box(solve_mwis_1d(&vg, &u, &free).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_solve_scaling,
    bench_floor_height,
    bench_vector_dp
);
criterion_main!(benches);
