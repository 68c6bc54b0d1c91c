use std::hint::black_box;

use ccl_bench::{hyperbolic_plane, plane_barrier, plane_hypotheses};
use ccl_core::{
    chern_laplacian_radial, chern_scalar_disk, exhaustion_solve, find_r0, monotone_solve,
    DirichletOperator, DiskField, GridFunction, PolarGrid, SolveOptions,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn laplacian(c: &mut Criterion) {
    let mut group = c.benchmark_group("laplacian");
    for cells in [1024usize, 4096, 16384] {
        let (model, _, grid) = hyperbolic_plane(16.0, cells);
        let u = GridFunction::from_fn(grid, |r| (-r * r).exp()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(cells), &u, |b, u| {
            b.iter(|| chern_laplacian_radial(&model, black_box(u)).unwrap())
        });
    }
    group.finish();
}

fn dirichlet(c: &mut Criterion) {
    let mut group = c.benchmark_group("dirichlet");
    for cells in [1024usize, 4096, 16384] {
        let (model, _, grid) = hyperbolic_plane(16.0, cells);
        let rhs = GridFunction::from_fn(grid, |r| r.sin()).unwrap();
        group.bench_with_input(BenchmarkId::new("factor", cells), &grid, |b, g| {
            b.iter(|| DirichletOperator::new(&model, *g, black_box(2.0)).unwrap())
        });
        let op = DirichletOperator::new(&model, grid, 2.0).unwrap();
        group.bench_with_input(BenchmarkId::new("solve", cells), &rhs, |b, f| {
            b.iter(|| op.solve(black_box(f.values()), 0.5).unwrap())
        });
    }
    group.finish();
}

fn monotone(c: &mut Criterion) {
    let (model, target, grid) = hyperbolic_plane(8.0, 512);
    let low = GridFunction::constant(grid, -1.0).unwrap();
    c.bench_function("monotone_solve/R8_N512", |b| {
        b.iter(|| {
            monotone_solve(
                &model,
                &target,
                8.0,
                black_box(&low),
                &SolveOptions::default(),
            )
            .unwrap()
        })
    });
}

fn exhaustion(c: &mut Criterion) {
    let (model, target, grid) = hyperbolic_plane(16.0, 2048);
    let barrier = plane_barrier(&model, &target, &grid);
    let mut group = c.benchmark_group("exhaustion");
    group.sample_size(10);
    group.bench_function("radii_4_8_12_16_N2048", |b| {
        b.iter(|| {
            exhaustion_solve(
                &model,
                &target,
                &[4.0, 8.0, 12.0, 16.0],
                black_box(&barrier.values),
                &SolveOptions::default(),
            )
            .unwrap()
        })
    });
    group.bench_function("glued_barrier_N2048", |b| {
        b.iter(|| plane_barrier(&model, &target, black_box(&grid)))
    });
    group.finish();
}

fn thresholds(c: &mut Criterion) {
    let hyp = plane_hypotheses();
    c.bench_function("find_r0", |b| {
        b.iter(|| find_r0(black_box(&hyp), 1.0, 1e4).unwrap())
    });
}

fn disk(c: &mut Criterion) {
    let grid = PolarGrid::new(200, 64, 0.95).unwrap();
    let field = DiskField::from_fn(grid, |x, y| (2.0 / (1.0 - x * x - y * y)).ln()).unwrap();
    c.bench_function("disk_oracle/200x64", |b| {
        b.iter(|| chern_scalar_disk(black_box(&field)).unwrap())
    });
}

criterion_group!(benches, laplacian, dirichlet, monotone, exhaustion, thresholds, disk);
criterion_main!(benches);
