//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test -- --nocapture`). Tolerances and runtime
//! budgets are pinned here.

mod support;

use discrete_appell::appell::{check_humbert_limit, eval_discrete_f2};
use discrete_appell::gamma::pochhammer_split;
use discrete_appell::identities::{
    check_reduction, default_grid, run_suite, IdentityFamily, ReductionKind, Tolerances,
};
use discrete_appell::operators::{residual_difference_equation, DifferenceEquation};
use discrete_appell::quadrature::{smoke_point, verify_integral_rep, IntegralRepId};
use discrete_appell::{
    eval_kdf, DiscreteParams, EvalError, EvalPoint, HumbertKind, KdFSpec, ParameterSet, Status,
    SummationConfig,
};
use num_complex::Complex64;
use std::time::Instant;
use support::{kdf_direct_oracle, ValueStream};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn report(criterion: &str, passed: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} — {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "acceptance {criterion} failed: {detail}");
}

/// Criterion 1: the reduction tower and all four KdF reductions agree to
/// 1e-12 relative on the 10-point grid (k spanning {0, 1, 2}), in under a
/// second.
#[test]
fn criterion_1_reduction_suite() {
    let start = Instant::now();
    let grid = default_grid(0);
    let cfg = SummationConfig::default();
    let mut worst = 0.0f64;
    let mut checks = 0usize;
    for kind in ReductionKind::ALL {
        for g in &grid {
            let out = check_reduction(kind, g, &cfg, 1e-12).unwrap();
            assert!(
                out.passed,
                "{kind:?} at {:?}: rel {}",
                g.point, out.rel_residual
            );
            worst = worst.max(out.rel_residual);
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        "1 (reductions)",
        checks == 70 && elapsed.as_secs_f64() < 1.0,
        &format!("{checks} checks, worst rel {worst:.2e}, {elapsed:.2?}"),
    );
}

/// Criterion 2: residuals of both first-analogue difference equations and
/// both second-analogue difference-differential equations stay below 1e-8
/// relative on at least five terminating points each, in under 5 s.
#[test]
fn criterion_2_difference_equations() {
    let start = Instant::now();
    let grid = default_grid(0);
    let cfg = SummationConfig::default();
    let mut worst = 0.0f64;
    let mut checks = 0usize;
    for which in [
        DifferenceEquation::V1X,
        DifferenceEquation::V1Y,
        DifferenceEquation::V2X,
        DifferenceEquation::V2Y,
    ] {
        for g in grid.iter().take(5) {
            let d = match which {
                DifferenceEquation::V1X | DifferenceEquation::V1Y => g.v1(),
                _ => g.v2(),
            };
            let out = residual_difference_equation(which, &g.params, &d, g.point, &cfg).unwrap();
            assert!(
                out.rel_residual <= 1e-8,
                "{which:?} at point {:?}: rel {}",
                g.point,
                out.rel_residual
            );
            worst = worst.max(out.rel_residual);
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        "2 (difference equations)",
        checks == 20 && elapsed.as_secs_f64() < 5.0,
        &format!("{checks} checks, worst rel {worst:.2e}, {elapsed:.2?}"),
    );
}

/// Criterion 3: the whole identity catalog (differential formulas r in
/// {1,2,3}, finite sums r in {0..3}, infinite sums at z in {0, 0.3} with
/// 60-term truncation, recursions s in {1,2,3}, 10 ladders + 45 pairwise
/// relations per flavor per variant) passes on the default grid at 1e-10
/// terminating / 1e-8 truncated, with more than 250 individual checks, in
/// under 60 s.
#[test]
fn criterion_3_identity_catalog() {
    let start = Instant::now();
    let families = [
        IdentityFamily::DiffOpFormula,
        IdentityFamily::DiffFormula,
        IdentityFamily::FiniteSum,
        IdentityFamily::InfiniteSum,
        IdentityFamily::Recursion,
        IdentityFamily::LadderDifferential,
        IdentityFamily::LadderDifference,
        IdentityFamily::PairwiseDifferential,
        IdentityFamily::PairwiseDifference,
    ];
    let grid = default_grid(0);
    let out = run_suite(
        &|id| families.contains(&id.family),
        &grid,
        &Tolerances::default(),
        &SummationConfig::default(),
    );
    for r in &out.results {
        assert!(r.passed, "{} failed: rel {} ({})", r.id, r.rel_residual, r.notes);
    }
    let elapsed = start.elapsed();
    let total = out.summary.pass + out.summary.fail + out.summary.skip;
    report(
        "3 (identity catalog)",
        out.summary.fail == 0 && out.summary.skip == 0 && total > 250
            && elapsed.as_secs_f64() < 60.0,
        &format!(
            "{} checks ({} pass, {} fail, {} skip), {elapsed:.2?}",
            total, out.summary.pass, out.summary.fail, out.summary.skip
        ),
    );
}

/// Criterion 4: all 11 integral representations match the series to 1e-6
/// relative at their terminating smoke points with order-64 rules and
/// order-monotone residuals, in under 30 s.
#[test]
fn criterion_4_integral_representations() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for id in IntegralRepId::ALL {
        let (params, d, p) = smoke_point(id);
        let out = verify_integral_rep(id, &params, &d, p, &[32, 48, 64]).unwrap();
        assert!(out.passed, "{id:?}: rel {} ({})", out.rel_residual, out.notes);
        worst = worst.max(out.rel_residual);
    }
    let elapsed = start.elapsed();
    report(
        "4 (integral representations)",
        elapsed.as_secs_f64() < 30.0,
        &format!("11 forms, worst final rel {worst:.2e}, {elapsed:.2?}"),
    );
}

/// Criterion 5: extrapolated Humbert limits for psi1 and psi2 in both
/// variants pass with residual at most 10 * eps_min * scale for
/// eps_min = 1e-4, in under 5 s.
#[test]
fn criterion_5_humbert_limits() {
    let start = Instant::now();
    let cfg = SummationConfig::default();
    let params = ParameterSet::real(1.2, 0.9, 1.4, 2.2, 1.7);
    let eps = [1e-2, 1e-3, 1e-4];
    let mut worst = 0.0f64;
    for kind in [HumbertKind::Psi1, HumbertKind::Psi2] {
        for d in [
            DiscreteParams::V1 {
                t1: c(2.0, 0.0),
                t2: c(2.0, 0.0),
                k1: 1,
                k2: 1,
            },
            DiscreteParams::V2 {
                t: c(3.0, 0.0),
                k: 1,
            },
        ] {
            let out =
                check_humbert_limit(kind, &params, &d, EvalPoint::real(0.3, 0.2), &eps, &cfg)
                    .unwrap();
            assert!(out.passed, "{kind:?} {d:?}: rel {}", out.rel_residual);
            worst = worst.max(out.rel_residual);
        }
    }
    let elapsed = start.elapsed();
    report(
        "5 (humbert limits)",
        elapsed.as_secs_f64() < 5.0,
        &format!("4 limits, worst residual/scale {worst:.2e} vs tol 1e-3, {elapsed:.2?}"),
    );
}

/// Criterion 6: the engine agrees with the independent direct-summation
/// oracle to 1e-12 relative on 20 convergent points, and the three-way
/// Pochhammer splitting identity holds to 1e-12 on 100 random points.
#[test]
fn criterion_6_oracle_equivalence() {
    let cfg = SummationConfig::default();
    let mut stream = ValueStream::new(7);
    let mut worst_kdf = 0.0f64;
    for i in 0..20 {
        let re = |s: &mut ValueStream| s.range(0.5, 2.5);
        // Four of the points carry small imaginary parts; four carry an
        // extra joint denominator row.
        let im = if i % 5 == 0 { 0.2 } else { 0.0 };
        let spec = KdFSpec {
            upper_joint: vec![c(re(&mut stream), im)],
            upper_x: vec![c(re(&mut stream), -im)],
            upper_y: vec![c(re(&mut stream), 0.0)],
            lower_joint: if i % 5 == 2 {
                vec![c(re(&mut stream) + 0.5, 0.0)]
            } else {
                vec![]
            },
            lower_x: vec![c(re(&mut stream) + 0.5, im)],
            lower_y: vec![c(re(&mut stream) + 0.5, 0.0)],
        };
        let x = c(stream.range(0.05, 0.35), 0.0);
        let y = c(stream.range(0.05, 0.55 - x.re), 0.0);
        let engine = eval_kdf(&spec, x, y, &cfg).unwrap();
        let oracle = kdf_direct_oracle(&spec, x, y, 80);
        let rel = (engine.value - oracle).norm() / oracle.norm().max(1e-300);
        assert!(rel <= 1e-12, "point {i}: engine {} oracle {oracle} rel {rel}", engine.value);
        worst_kdf = worst_kdf.max(rel);
    }

    let mut worst_split = 0.0f64;
    for i in 0..100 {
        let a = c(stream.range(-3.0, 3.0), stream.range(-2.0, 2.0));
        let m = (stream.next_u64() % 7) as usize;
        let n = (stream.next_u64() % 7) as usize;
        let r = (stream.next_u64() % 7) as usize;
        let (whole, left, right) = pochhammer_split(a, m, n, r);
        let scale = whole.norm().max(left.norm()).max(right.norm()).max(1e-300);
        let rel = ((whole - left).norm() + (whole - right).norm()) / scale;
        assert!(rel <= 1e-12, "point {i}: a={a} m={m} n={n} r={r}: {rel}");
        worst_split = worst_split.max(rel);
    }
    report(
        "6 (oracle equivalence)",
        true,
        &format!("20 kdf points worst rel {worst_kdf:.2e}; 100 splits worst rel {worst_split:.2e}"),
    );
}

/// Criterion 7: for k = 1, non-integer t = 0.5, x = 0.5, y = 0 the engine
/// reports DivergenceDetected and never a silent value.
#[test]
fn criterion_7_divergence_honesty() {
    let params = ParameterSet::real(1.3, 0.7, 1.1, 2.2, 1.9);
    let d = DiscreteParams::V1 {
        t1: c(0.5, 0.0),
        t2: c(2.0, 0.0),
        k1: 1,
        k2: 1,
    };
    let out = eval_discrete_f2(
        &params,
        &d,
        EvalPoint::real(0.5, 0.0),
        &SummationConfig::default(),
    );
    let honest = matches!(
        &out,
        Err(EvalError::Divergence { partial }) if partial.status == Status::DivergenceDetected
    );
    report(
        "7 (divergence honesty)",
        honest,
        &format!("k=1, t=0.5, x=0.5 reported {out:?}"),
    );
}
