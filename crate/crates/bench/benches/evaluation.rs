use criterion::{criterion_group, criterion_main, Criterion};
use discrete_appell::identities::{default_grid, run_suite, IdentityFamily, Tolerances};
use discrete_appell::{
    eval_discrete_f2, eval_kdf, DiscreteParams, EvalPoint, KdFSpec, ParameterSet, SummationConfig,
};
use num_complex::Complex64;
use std::hint::black_box;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn bench_kdf_convergent(crit: &mut Criterion) {
    let spec = KdFSpec {
        upper_joint: vec![c(1.3)],
        upper_x: vec![c(0.7)],
        upper_y: vec![c(1.1)],
        lower_x: vec![c(2.2)],
        lower_y: vec![c(1.9)],
        ..Default::default()
    };
    let cfg = SummationConfig::default();
    crit.bench_function("kdf_f2_convergent_point", |b| {
        b.iter(|| eval_kdf(black_box(&spec), c(0.3), c(0.25), &cfg).unwrap())
    });
}

fn bench_discrete_terminating(crit: &mut Criterion) {
    let params = ParameterSet::real(1.3, 0.7, 1.1, 2.2, 1.9);
    let d = DiscreteParams::V1 {
        t1: c(4.0),
        t2: c(3.0),
        k1: 1,
        k2: 1,
    };
    let p = EvalPoint::real(0.25, 0.2);
    let cfg = SummationConfig::default();
    crit.bench_function("discrete_f2_terminating", |b| {
        b.iter(|| eval_discrete_f2(black_box(&params), &d, p, &cfg).unwrap())
    });
}

fn bench_reduction_suite(crit: &mut Criterion) {
    let grid = default_grid(0);
    let tols = Tolerances::default();
    let cfg = SummationConfig::default();
    crit.bench_function("suite_reduction_family", |b| {
        b.iter(|| {
            run_suite(
                &|id| id.family == IdentityFamily::Reduction,
                black_box(&grid),
                &tols,
                &cfg,
            )
        })
    });
}

criterion_group!(
    benches,
    bench_kdf_convergent,
    bench_discrete_terminating,
    bench_reduction_suite
);
criterion_main!(benches);
