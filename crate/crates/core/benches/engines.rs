use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracfield::analytic::GaussianBump;
use fracfield::exec::Execution;
use fracfield::quadrature::{evaluate_batch, frac_gradient, QuadratureConfig};
use fracfield::spectral;
use fracfield::verify::seeded_points;

fn execution(c: &mut Criterion) {
    let f = GaussianBump::standard(2).field();
    let cfg = QuadratureConfig::default();
    let pts = seeded_points(2, 16, 1.0, 3);
    let mut group = c.benchmark_group("direct_batch");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_function(BenchmarkId::new(name, pts.len()), |b| {
            b.iter(|| evaluate_batch(exec, &pts, |x| frac_gradient(&f, 0.5, x, &cfg)).unwrap())
        });
    }
    group.finish();
}

fn engines(c: &mut Criterion) {
    let f = GaussianBump::standard(2).field();
    let cfg = QuadratureConfig::default();
    let x = [0.3, -0.2, 0.0];
    let mut group = c.benchmark_group("engines");
    group.sample_size(10);
    group.bench_function("direct_point", |b| b.iter(|| frac_gradient(&f, 0.5, black_box(&x), &cfg).unwrap()));
    for n in [128usize, 256, 512] {
        group.bench_with_input(BenchmarkId::new("spectral_grid", n), &n, |b, &n| {
            b.iter(|| {
                let pf = spectral::embed(&f, 16.0, n).unwrap();
                spectral::spectral_frac_gradient(&pf, 0.5).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, execution, engines);
criterion_main!(benches);
