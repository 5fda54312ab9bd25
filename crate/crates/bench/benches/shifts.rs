use cprabi::{
    evolve, nonadditive_leading, offresonant_shift, pair_frequency, rabi_params, rubidium87, ComplexRate, ShiftSet,
    ShiftSettings,
};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn shifts(c: &mut Criterion) {
    let rb = rubidium87();
    let (g, e) = rb.default_pair().unwrap();
    let settings = ShiftSettings::default();
    let mut group = c.benchmark_group("shift");
    for z in [40e-9, 270e-9, 1e-6] {
        let label = format!("{:.0}nm", z * 1e9);
        group.bench_with_input(BenchmarkId::new("offresonant_ge", &label), &z, |b, &z| {
            b.iter(|| offresonant_shift(&g, &e, &rb, black_box(z), pair_frequency(&g, &e), &settings).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("leading_order", &label), &z, |b, &z| {
            b.iter(|| nonadditive_leading(&rb, black_box(z), &settings).unwrap())
        });
    }
    group.finish();
}

fn dynamics(c: &mut Criterion) {
    let rate = |x: f64| ComplexRate::conservative(x * 1e-27);
    let shifts = ShiftSet::new(rate(-3.7), rate(-3.7), rate(0.5), rate(0.5)).unwrap();
    let params = rabi_params(&shifts, 0.0, 0.0);
    c.bench_function("rabi_params", |b| b.iter(|| rabi_params(black_box(&shifts), 0.0, 0.0)));
    c.bench_function("evolve", |b| b.iter(|| evolve(&params, black_box(0.3)).unwrap()));
}

criterion_group!(benches, shifts, dynamics);
criterion_main!(benches);
