use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lomse_core::dynamics::{lemma_triples_extended, DEFAULT_SEED_EPSILON, DEFAULT_T_MAX};
use lomse_core::{
    barrier_certificate_a3, barrier_certificate_a4, extract_profile, integrate_orbit, nonminimizing_verdict,
    seed_unstable, validate_params, verify_hopf, LomseParams, Orbit, OrbitOptions,
};
use std::hint::black_box;

const TRIPLES: [(i64, i64, i64); 4] = [(3, 2, 2), (3, 2, 4), (5, 4, 6), (15, 8, 2)];

fn orbit(prm: &LomseParams) -> Orbit {
    integrate_orbit(prm, seed_unstable(prm, DEFAULT_SEED_EPSILON), DEFAULT_T_MAX, &OrbitOptions::default()).unwrap()
}

fn integration(c: &mut Criterion) {
    let mut g = c.benchmark_group("integrate_orbit");
    for (n, p, k) in TRIPLES {
        let prm = validate_params(n, p, k).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(format!("{n}-{p}-{k}")), &prm, |b, prm| {
            b.iter(|| orbit(black_box(prm)))
        });
    }
    g.finish();
}

fn certificates(c: &mut Criterion) {
    let node = validate_params(5, 4, 4).unwrap();
    let spiral = validate_params(3, 2, 4).unwrap();
    c.bench_function("barrier_certificate_a3 5-4-4", |b| b.iter(|| barrier_certificate_a3(black_box(&node))));
    c.bench_function("barrier_certificate_a4 3-2-4", |b| b.iter(|| barrier_certificate_a4(black_box(&spiral))));
    let o = orbit(&spiral);
    let opts = OrbitOptions::default();
    c.bench_function("lemma_triples_extended 3-2-4", |b| {
        b.iter(|| lemma_triples_extended(black_box(&o), &spiral, 6, &opts))
    });
}

fn densities(c: &mut Criterion) {
    let prm = validate_params(3, 2, 4).unwrap();
    let o = orbit(&prm);
    let prof = extract_profile(&o, &prm).unwrap();
    c.bench_function("extract_profile 3-2-4", |b| b.iter(|| extract_profile(black_box(&o), &prm)));
    c.bench_function("nonminimizing_verdict 3-2-4", |b| b.iter(|| nonminimizing_verdict(black_box(&prof), &o, &prm)));
}

fn hopf(c: &mut Criterion) {
    c.bench_function("verify_hopf 1000", |b| b.iter(|| verify_hopf(black_box(1000), 0)));
}

criterion_group!(benches, integration, certificates, densities, hopf);
criterion_main!(benches);
