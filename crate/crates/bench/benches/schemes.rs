use criterion::{criterion_group, criterion_main, Criterion};
use invpdelta::verify::invariance_suite;
use invpdelta::{builtin_algebra, make_scheme, run, Equation, Variant};
use invpdelta_bench::{burgers_rational_config, exact_lattice, heat_exp_config};
use std::hint::black_box;

fn residuals(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice_residuals");
    for (eq, name) in [
        (Equation::Heat, "fundamental"),
        (Equation::Burgers, "rational"),
        (Equation::Kdv, "rational"),
    ] {
        let lat = exact_lattice(eq, name);
        let scheme = make_scheme(eq, Variant::InvariantImplicit).unwrap();
        group.bench_function(format!("{eq}_{name}"), |b| {
            b.iter(|| scheme.lattice_residuals(black_box(&lat)).unwrap())
        });
    }
    group.finish();
}

fn marching(c: &mut Criterion) {
    let mut group = c.benchmark_group("march_10_levels");
    group.sample_size(20);
    for v in [
        Variant::InvariantExplicit,
        Variant::InvariantImplicit,
        Variant::StandardImplicit,
    ] {
        let cfg = heat_exp_config(v, 41, 10);
        group.bench_function(format!("heat_{v}"), |b| b.iter(|| run(black_box(&cfg)).unwrap()));
    }
    for v in [Variant::InvariantImplicit, Variant::AdaptedImplicit] {
        let cfg = burgers_rational_config(v, 10);
        group.bench_function(format!("burgers_{v}"), |b| b.iter(|| run(black_box(&cfg)).unwrap()));
    }
    group.finish();
}

fn invariance(c: &mut Criterion) {
    let mut group = c.benchmark_group("invariance_suite_50");
    group.sample_size(10);
    for eq in [Equation::Heat, Equation::Kdv] {
        let scheme = make_scheme(eq, Variant::InvariantExplicit).unwrap();
        let alg = builtin_algebra(eq);
        group.bench_function(eq.to_string(), |b| {
            b.iter(|| invariance_suite(&scheme, &alg, 50, black_box(1)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, residuals, marching, invariance);
criterion_main!(benches);
