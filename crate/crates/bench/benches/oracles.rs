use criterion::{criterion_group, criterion_main, Criterion};
use qmc_bench::connected_graph;
use qmc_core::fourier::{transform, BooleanTable};
use qmc_core::graph::families::cycle;
use qmc_core::oracles::{max_cut_exact, qmc_exact};
use qmc_core::relaxation::{solve_vector_program, RelaxationOptions};

fn exact_qmc(c: &mut Criterion) {
    let g10 = cycle(10);
    let g12 = connected_graph(12, 0.3, 1, 4);
    c.bench_function("qmc_exact cycle 10", |b| {
        b.iter(|| qmc_exact(&g10, 1e-9).unwrap().value)
    });
    c.bench_function("qmc_exact random n=12", |b| {
        b.iter(|| qmc_exact(&g12, 1e-9).unwrap().value)
    });
}

fn maxcut(c: &mut Criterion) {
    let g = connected_graph(22, 0.25, 5, 5);
    c.bench_function("max_cut_exact n=22", |b| {
        b.iter(|| max_cut_exact(&g).unwrap().value)
    });
}

fn relaxation(c: &mut Criterion) {
    let g = connected_graph(8, 0.4, 3, 6);
    c.bench_function("vector program n=8", |b| {
        b.iter(|| {
            solve_vector_program(&g, RelaxationOptions::new(8))
                .unwrap()
                .best_value
        })
    });
}

fn fourier(c: &mut Criterion) {
    let f = BooleanTable::from_fn(12, |x| (x.count_ones() % 3) as f64).unwrap();
    c.bench_function("walsh-hadamard n=12", |b| b.iter(|| transform(&f)));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = exact_qmc, maxcut, relaxation, fourier
}
criterion_main!(benches);
