use criterion::{black_box, criterion_group, criterion_main, Criterion};

use tropvol_bench::{skewed, four_by_five, modular_square};
use tropvol_core::scalar::ratio;
use tropvol_core::{
    count_lattice_points, count_lattice_points_sweep, outer_parallel_body, tropical_permanent,
    tropical_rank, volume, volume_by_cells, Budget, VertexPolytope,
};

fn volumes(c: &mut Criterion) {
    let skew = VertexPolytope::new(&skewed()).unwrap();
    let big = VertexPolytope::new(&four_by_five()).unwrap();
    let hopb = outer_parallel_body(&skew, &ratio(1, 2)).unwrap();
    c.bench_function("volume skew", |b| b.iter(|| volume(black_box(&skew), Budget::unlimited())));
    c.bench_function("volume 4x5", |b| b.iter(|| volume(black_box(&big), Budget::unlimited())));
    c.bench_function("volume skew + B_H(1/2)", |b| {
        b.iter(|| volume(black_box(&hopb), Budget::unlimited()))
    });
    c.bench_function("volume_by_cells 4x5", |b| b.iter(|| volume_by_cells(black_box(&four_by_five()))));
}

fn counts(c: &mut Criterion) {
    let big = VertexPolytope::new(&four_by_five()).unwrap();
    c.bench_function("count box 4x5 s=3", |b| {
        b.iter(|| count_lattice_points(black_box(&big), 3, Budget::unlimited()))
    });
    c.bench_function("count sweep 4x5 s=3", |b| {
        b.iter(|| count_lattice_points_sweep(black_box(&big), 3, Budget::unlimited()))
    });
}

fn ranks(c: &mut Criterion) {
    let sq = modular_square(8);
    c.bench_function("permanent 8x8", |b| b.iter(|| tropical_permanent(black_box(&sq))));
    let sq = modular_square(6);
    c.bench_function("rank 6x6", |b| b.iter(|| tropical_rank(black_box(&sq))));
}

criterion_group!(benches, volumes, counts, ranks);
criterion_main!(benches);
