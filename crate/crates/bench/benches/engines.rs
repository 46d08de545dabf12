use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use octant_bench::{excursions, model, EXTRACTION_3D, FINITE_3D, INFINITE_3D};
use octant_core::group::DEFAULT_BOUND;
use octant_core::modp::DEFAULT_PRIME;
use octant_core::symbolic::{expand_ratfunc, Var, Window};
use octant_core::{explore_group, guess_precursive, octant_series, orbit_sum, GroupSetup, Mode};

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("octant_series_modp");
    g.sample_size(10);
    let s = model(INFINITE_3D);
    for n in [50usize, 100] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| octant_series(s, n, Mode::Modular(DEFAULT_PRIME)).unwrap())
        });
    }
    g.finish();
}

fn groups(c: &mut Criterion) {
    let mut g = c.benchmark_group("explore_group");
    for (name, text) in [("finite", FINITE_3D), ("infinite", INFINITE_3D)] {
        let setup = GroupSetup::from_stepset(model(text)).unwrap();
        g.bench_function(name, |b| b.iter(|| explore_group(&setup, DEFAULT_BOUND).unwrap()));
    }
    g.finish();
}

fn expansion(c: &mut Criterion) {
    let setup = GroupSetup::from_stepset(model(EXTRACTION_3D)).unwrap();
    let group = explore_group(&setup, DEFAULT_BOUND).unwrap();
    let os = orbit_sum(group.finite().unwrap());
    c.bench_function("expand_orbit_sum", |b| {
        b.iter(|| expand_ratfunc(&os, &[Var::Z, Var::Y, Var::X], 0, Window::cube(-11, 25)).unwrap())
    });
}

fn guessing(c: &mut Criterion) {
    let seq = excursions(100);
    let mut g = c.benchmark_group("guess_precursive");
    g.sample_size(10);
    g.bench_function("r2_d3", |b| b.iter(|| guess_precursive(&seq, 2, 3, DEFAULT_PRIME).unwrap()));
    g.finish();
}

criterion_group!(benches, counting, groups, expansion, guessing);
criterion_main!(benches);
