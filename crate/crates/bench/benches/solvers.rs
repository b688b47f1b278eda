use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use scatterfm::bie::{assemble_boundary_operator, ExteriorSolver, Obstacle, OperatorKind};
use scatterfm::factorization::{build_sharp, reconstruct, Window, DEFAULT_TRUNCATION};
use scatterfm::farfield::{assemble_far_field_operator, DirectionGrid, SolverParams};
use scatterfm::geometry::{ContrastForm, ContrastSpec};
use scatterfm::kernel::Wavenumber;
use scatterfm::medium::{MediumSolver, VolumeGrid};
use scatterfm::specfun::{bessel_j_all, hankel1_all};
use scatterfm::{BoundaryCondition, Complex64, Curve};
use scatterfm_bench::kite_scene;

fn special_functions(c: &mut Criterion) {
    c.bench_function("bessel_j_all order 40", |b| b.iter(|| bessel_j_all(40, black_box(7.3))));
    c.bench_function("hankel1_all order 40", |b| b.iter(|| hankel1_all(40, black_box(7.3))));
}

fn boundary_operators(c: &mut Criterion) {
    let curve = Curve::kite([0.0, 0.0], 1.0, 0.0).unwrap();
    let mut group = c.benchmark_group("assemble");
    for n in [32, 64] {
        group.bench_with_input(BenchmarkId::new("single layer", 2 * n), &n, |b, &n| {
            b.iter(|| assemble_boundary_operator(OperatorKind::S, std::slice::from_ref(&curve), Wavenumber::Real(3.0), n))
        });
        group.bench_with_input(BenchmarkId::new("hypersingular", 2 * n), &n, |b, &n| {
            b.iter(|| assemble_boundary_operator(OperatorKind::N, std::slice::from_ref(&curve), Wavenumber::Real(3.0), n))
        });
    }
    group.finish();
}

fn exterior_solve(c: &mut Criterion) {
    let scene = kite_scene();
    let obstacles = [
        Obstacle::new(scene.omega1.clone(), BoundaryCondition::Dirichlet),
        Obstacle::new(scene.omega2.clone(), BoundaryCondition::Neumann),
    ];
    let mut group = c.benchmark_group("exterior");
    group.sample_size(10);
    group.bench_function("factor two bodies, 2x128 nodes", |b| {
        b.iter(|| ExteriorSolver::new(&obstacles, 3.0, 64).unwrap())
    });
    let grid = DirectionGrid::new(32).unwrap();
    group.bench_function("far-field operator N=32", |b| {
        b.iter(|| {
            assemble_far_field_operator(
                &scene,
                grid,
                SolverParams {
                    boundary_nodes: 48,
                    volume_grid: 0,
                },
            )
            .unwrap()
        })
    });
    group.finish();
}

fn medium_solve(c: &mut Criterion) {
    let spec = ContrastSpec::new(ContrastForm::Constant, Complex64::new(0.5, 0.0), Curve::circle([0.0, 0.0], 1.0).unwrap()).unwrap();
    let grid = Arc::new(VolumeGrid::new(&spec, 24).unwrap());
    let mut group = c.benchmark_group("medium");
    group.sample_size(10);
    group.bench_function("factor m=24", |b| b.iter(|| MediumSolver::new(grid.clone(), None, 1.0, 16).unwrap()));
    group.finish();
}

fn factorization(c: &mut Criterion) {
    let scene = kite_scene();
    let f = assemble_far_field_operator(
        &scene,
        DirectionGrid::new(64).unwrap(),
        SolverParams {
            boundary_nodes: 48,
            volume_grid: 0,
        },
    )
    .unwrap();
    let sharp = build_sharp(&f, 0.0).unwrap();
    let window = Window::new(-6.0, 6.0, -6.0, 6.0, 40).unwrap();
    let mut group = c.benchmark_group("factorization");
    group.sample_size(10);
    group.bench_function("build F# N=64", |b| b.iter(|| build_sharp(black_box(&f), 0.0).unwrap()));
    group.bench_function("indicator 40x40", |b| {
        b.iter(|| reconstruct(&sharp, window, Some(&scene.b2), DEFAULT_TRUNCATION))
    });
    group.finish();
}

criterion_group!(benches, special_functions, boundary_operators, exterior_solve, medium_solve, factorization);
criterion_main!(benches);
