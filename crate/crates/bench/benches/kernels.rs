use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use convhide_bench::{lp_instance, polyhedra, tolerance};
use convhide_core::hausdorff::hausdorff_distance;
use convhide_core::hiding::{hidden_set_2d, packing_family};
use convhide_core::numeric::lp::lp_solve;
use convhide_core::numeric::{int, rat};
use convhide_core::polyhedra::vrep_of;
use convhide_core::{classify, ClassifyBudget, ConvexBodyOracle, Norm};

fn lp(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp_solve");
    for dim in [2, 4, 6] {
        let problem = lp_instance(1, dim, 3 * dim);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &problem, |b, p| b.iter(|| lp_solve(black_box(p))));
    }
    group.finish();
}

fn double_description(c: &mut Criterion) {
    let mut group = c.benchmark_group("vrep_of");
    for dim in [2, 3, 4] {
        let sets = polyhedra(2, dim, 8);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &sets, |b, sets| {
            b.iter(|| sets.iter().map(|p| vrep_of(black_box(p)).unwrap().points().len()).sum::<usize>())
        });
    }
    group.finish();
}

fn hausdorff(c: &mut Criterion) {
    let mut group = c.benchmark_group("hausdorff_distance");
    for dim in [2, 3] {
        let sets = polyhedra(3, dim, 2);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &sets, |b, sets| {
            b.iter(|| hausdorff_distance(black_box(&sets[0]), black_box(&sets[1]), Norm::Sup).unwrap())
        });
    }
    group.finish();
}

fn hidden_sets(c: &mut Criterion) {
    let body = ConvexBodyOracle::parabola();
    let tol = tolerance();
    let mut group = c.benchmark_group("hidden_set_2d");
    for n in [4, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| hidden_set_2d(&body, n, &tol).unwrap()));
    }
    group.finish();
}

fn packing(c: &mut Criterion) {
    let body = ConvexBodyOracle::parabola();
    let tol = tolerance();
    let mut group = c.benchmark_group("packing_family");
    group.sample_size(10);
    for k in [2, 3] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| packing_family(&body, &int(1), k, &tol, Norm::Sup).unwrap())
        });
    }
    group.finish();
}

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    group.sample_size(10);
    let budget = ClassifyBudget::default();
    for (name, body) in [("parabola", ConvexBodyOracle::parabola()), ("hyperbola", ConvexBodyOracle::hyperbola())] {
        group.bench_function(name, |b| b.iter(|| classify(&body, &rat(1, 100), &budget, Norm::Sup).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, lp, double_description, hausdorff, hidden_sets, packing, classification);
criterion_main!(benches);
