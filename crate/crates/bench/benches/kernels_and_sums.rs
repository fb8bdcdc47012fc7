use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use dhlab::analysis::{omega_estimate, SingularIntegralSpec};
use dhlab::expsums::weyl_sum_naive;
use dhlab::kernels::{sandwich_sweep, sandwich_truncation};
use dhlab::{mean_value_parseval, weyl_sum, DiagonalForm, KernelKind, KernelSpec, WeylSumSpec};

fn weyl(c: &mut Criterion) {
    let spec = WeylSumSpec::new(3, 2f64.sqrt(), 0, 100_000).unwrap();
    c.bench_function("weyl_sum k=3 P=1e5", |b| {
        b.iter(|| weyl_sum(&spec, black_box(0.123_456_789)))
    });
    c.bench_function("weyl_sum_naive k=3 P=1e5", |b| {
        b.iter(|| weyl_sum_naive(&spec, black_box(0.123_456_789)))
    });
}

fn omega(c: &mut Criterion) {
    let form = DiagonalForm::new(3, vec![3.0, 1.0, 2f64.sqrt(), std::f64::consts::PI]).unwrap();
    let spec = SingularIntegralSpec::new(form, 0.5);
    c.bench_function("omega s=4", |b| b.iter(|| omega_estimate(black_box(&spec))));
}

fn parseval(c: &mut Criterion) {
    c.bench_function("mean_value_parseval k=3 s=3 P=200", |b| {
        b.iter(|| mean_value_parseval(3, 3, black_box(200), None))
    });
}

fn sandwich(c: &mut Criterion) {
    let spec = KernelSpec::new(KernelKind::KMinus, 1.0, 0.1).unwrap();
    let a = sandwich_truncation(0.1, 5e-4);
    let ts: Vec<f64> = (0..20).map(|i| -2.0 + 0.2 * i as f64 + 0.01).collect();
    let mut g = c.benchmark_group("kernels");
    g.sample_size(10);
    g.bench_function("sandwich_sweep 20 points", |b| {
        b.iter(|| sandwich_sweep(black_box(&ts), &spec, a))
    });
    g.finish();
}

criterion_group!(benches, weyl, omega, parseval, sandwich);
criterion_main!(benches);
