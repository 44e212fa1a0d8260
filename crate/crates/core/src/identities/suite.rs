//! The verification grid, the reduction checks, and the suite runner that
//! executes every cataloged identity and collects residual reports.

use super::checks::{check_diff_formula, check_recursion, check_summation, DiffFormula, RecursionFormula, SummationFormula};
use super::ladders::{check_ladder, check_pairwise, LadderFlavor, ALL_LADDER_TAGS};
use super::{IdentityCheckResult, IdentityFamily, IdentityId, PointRecord, Tolerances, VariantTag};
use crate::appell::{
    check_humbert_limit, eval_discrete_f2, eval_f2, DiscreteParams, EvalPoint, HumbertKind,
    ParameterSet,
};
use crate::error::{EvalError, Result};
use crate::operators::{residual_difference_equation, DifferenceEquation};
use crate::quadrature::{smoke_point, verify_integral_rep, IntegralRepId};
use crate::series::{eval_kdf, KdFSpec, SummationConfig};
use num_complex::Complex64;
use serde::Serialize;

/// One point of the verification grid: generic non-integer classical
/// parameters, terminating discrete data, and arguments inside the
/// convergence region.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub params: ParameterSet,
    pub t1: Complex64,
    pub t2: Complex64,
    pub k1: usize,
    pub k2: usize,
    pub point: EvalPoint,
}

impl GridPoint {
    pub fn v1(&self) -> DiscreteParams {
        DiscreteParams::V1 {
            t1: self.t1,
            t2: self.t2,
            k1: self.k1,
            k2: self.k2,
        }
    }

    /// V1 data with the shared step index required by the recursion
    /// formulas.
    pub fn v1_single_k(&self) -> DiscreteParams {
        DiscreteParams::V1 {
            t1: self.t1,
            t2: self.t2,
            k1: self.k1,
            k2: self.k1,
        }
    }

    /// V1 data with unit steps (forward-difference formulas).
    pub fn v1_unit_k(&self) -> DiscreteParams {
        DiscreteParams::V1 {
            t1: self.t1,
            t2: self.t2,
            k1: 1,
            k2: 1,
        }
    }

    pub fn v2(&self) -> DiscreteParams {
        DiscreteParams::V2 {
            t: self.t1,
            k: self.k1,
        }
    }

    pub fn v3(&self) -> DiscreteParams {
        DiscreteParams::V3 {
            t1: self.t1,
            t2: self.t2,
            k: self.k1,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_f64(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// A generic parameter in (0.5, 2.5) kept at distance >= 0.1 from the
/// integer lattice, so that integer shifts up to 3 steps never land on a
/// pole or an accidental termination.
fn generic_parameter(state: &mut u64) -> f64 {
    let mut v = 0.5 + 2.0 * unit_f64(state);
    let frac = v - v.floor();
    if frac < 0.1 {
        v += 0.1;
    } else if frac > 0.9 {
        v -= 0.1;
    }
    v
}

/// The default verification grid: terminating t in {2,3,4}, k in {1,2},
/// |x| + |y| <= 0.6, generic parameters jittered deterministically from the
/// seed.
pub fn default_grid(seed: u64) -> Vec<GridPoint> {
    const T_PAIRS: [(f64, f64); 10] = [
        (2.0, 3.0),
        (3.0, 2.0),
        (4.0, 2.0),
        (2.0, 2.0),
        (3.0, 3.0),
        (4.0, 4.0),
        (2.0, 4.0),
        (3.0, 4.0),
        (4.0, 3.0),
        (2.0, 3.0),
    ];
    const K_PAIRS: [(usize, usize); 10] = [
        (1, 1),
        (1, 1),
        (2, 1),
        (1, 2),
        (2, 2),
        (1, 1),
        (2, 2),
        (1, 1),
        (1, 2),
        (2, 1),
    ];
    const XY: [(f64, f64); 10] = [
        (0.25, 0.2),
        (0.3, 0.15),
        (0.1, 0.4),
        (0.2, 0.2),
        (0.35, 0.1),
        (0.15, 0.3),
        (0.4, 0.1),
        (0.2, 0.3),
        (0.3, 0.2),
        (0.25, 0.25),
    ];
    let mut state = seed ^ 0xA076_1D64_78BD_642F;
    (0..10)
        .map(|i| {
            let params = ParameterSet::real(
                generic_parameter(&mut state),
                generic_parameter(&mut state),
                generic_parameter(&mut state),
                generic_parameter(&mut state),
                generic_parameter(&mut state),
            );
            GridPoint {
                params,
                t1: Complex64::new(T_PAIRS[i].0, 0.0),
                t2: Complex64::new(T_PAIRS[i].1, 0.0),
                k1: K_PAIRS[i].0,
                k2: K_PAIRS[i].1,
                point: EvalPoint::real(XY[i].0, XY[i].1),
            }
        })
        .collect()
}

/// The reduction identities connecting the family members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    /// First analogue at k1 = k2 = 0 equals classical F2.
    V1StepsZero,
    /// Second analogue at k = 0 equals classical F2.
    V2StepZero,
    /// First analogue at k1 = k2 = k equals the third analogue.
    V1EqualsV3,
    /// First analogue at (k1, k2) = (0, 1) as a Kampé de Fériet series.
    V1Kdf01,
    /// First analogue at (k1, k2) = (1, 0) as a Kampé de Fériet series.
    V1Kdf10,
    /// First analogue at (k1, k2) = (1, 1) as a Kampé de Fériet series.
    V1Kdf11,
    /// Second analogue at k = 1 as a Kampé de Fériet series.
    V2Kdf1,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 7] = [
        ReductionKind::V1StepsZero,
        ReductionKind::V2StepZero,
        ReductionKind::V1EqualsV3,
        ReductionKind::V1Kdf01,
        ReductionKind::V1Kdf10,
        ReductionKind::V1Kdf11,
        ReductionKind::V2Kdf1,
    ];

    pub fn variant(&self) -> VariantTag {
        match self {
            ReductionKind::V2StepZero | ReductionKind::V2Kdf1 => VariantTag::V2,
            _ => VariantTag::V1,
        }
    }

    pub fn detail(&self) -> &'static str {
        match self {
            ReductionKind::V1StepsZero => "k00-f2",
            ReductionKind::V2StepZero => "k0-f2",
            ReductionKind::V1EqualsV3 => "v1-eq-v3",
            ReductionKind::V1Kdf01 => "kdf-k01",
            ReductionKind::V1Kdf10 => "kdf-k10",
            ReductionKind::V1Kdf11 => "kdf-k11",
            ReductionKind::V2Kdf1 => "kdf-k1",
        }
    }
}

/// Checks one reduction identity on a grid point.
pub fn check_reduction(
    kind: ReductionKind,
    g: &GridPoint,
    cfg: &SummationConfig,
    tolerance: f64,
) -> Result<IdentityCheckResult> {
    let params = g.params;
    let p = g.point;
    let id = IdentityId::new(IdentityFamily::Reduction, kind.variant(), kind.detail());
    let (lhs, rhs, d_used) = match kind {
        ReductionKind::V1StepsZero => {
            let d = DiscreteParams::V1 {
                t1: g.t1,
                t2: g.t2,
                k1: 0,
                k2: 0,
            };
            (
                eval_discrete_f2(&params, &d, p, cfg)?.value,
                eval_f2(&params, p, cfg)?.value,
                d,
            )
        }
        ReductionKind::V2StepZero => {
            let d = DiscreteParams::V2 { t: g.t1, k: 0 };
            (
                eval_discrete_f2(&params, &d, p, cfg)?.value,
                eval_f2(&params, p, cfg)?.value,
                d,
            )
        }
        ReductionKind::V1EqualsV3 => {
            let d = g.v1_single_k();
            (
                eval_discrete_f2(&params, &d, p, cfg)?.value,
                eval_discrete_f2(&params, &g.v3(), p, cfg)?.value,
                d,
            )
        }
        ReductionKind::V1Kdf01 => {
            let d = DiscreteParams::V1 {
                t1: g.t1,
                t2: g.t2,
                k1: 0,
                k2: 1,
            };
            let spec = KdFSpec {
                upper_joint: vec![params.a],
                upper_x: vec![params.b1],
                upper_y: vec![params.b2, -g.t2],
                lower_x: vec![params.c1],
                lower_y: vec![params.c2],
                ..Default::default()
            };
            (
                eval_discrete_f2(&params, &d, p, cfg)?.value,
                eval_kdf(&spec, p.x, -p.y, cfg)?.value,
                d,
            )
        }
        ReductionKind::V1Kdf10 => {
            let d = DiscreteParams::V1 {
                t1: g.t1,
                t2: g.t2,
                k1: 1,
                k2: 0,
            };
            let spec = KdFSpec {
                upper_joint: vec![params.a],
                upper_x: vec![params.b1, -g.t1],
                upper_y: vec![params.b2],
                lower_x: vec![params.c1],
                lower_y: vec![params.c2],
                ..Default::default()
            };
            (
                eval_discrete_f2(&params, &d, p, cfg)?.value,
                eval_kdf(&spec, -p.x, p.y, cfg)?.value,
                d,
            )
        }
        ReductionKind::V1Kdf11 => {
            let d = DiscreteParams::V1 {
                t1: g.t1,
                t2: g.t2,
                k1: 1,
                k2: 1,
            };
            let spec = KdFSpec {
                upper_joint: vec![params.a],
                upper_x: vec![params.b1, -g.t1],
                upper_y: vec![params.b2, -g.t2],
                lower_x: vec![params.c1],
                lower_y: vec![params.c2],
                ..Default::default()
            };
            (
                eval_discrete_f2(&params, &d, p, cfg)?.value,
                eval_kdf(&spec, -p.x, -p.y, cfg)?.value,
                d,
            )
        }
        ReductionKind::V2Kdf1 => {
            let d = DiscreteParams::V2 { t: g.t1, k: 1 };
            let spec = KdFSpec {
                upper_joint: vec![params.a, -g.t1],
                upper_x: vec![params.b1],
                upper_y: vec![params.b2],
                lower_x: vec![params.c1],
                lower_y: vec![params.c2],
                ..Default::default()
            };
            (
                eval_discrete_f2(&params, &d, p, cfg)?.value,
                eval_kdf(&spec, -p.x, -p.y, cfg)?.value,
                d,
            )
        }
    };
    Ok(IdentityCheckResult::from_sides(
        id,
        PointRecord::from_parts(&params, Some(&d_used), Some(p)),
        lhs,
        rhs,
        tolerance,
    ))
}

/// Pass/fail/skip counts of one suite run.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SuiteSummary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

/// Results of a suite run in deterministic id order, plus summary counts.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub results: Vec<IdentityCheckResult>,
    pub summary: SuiteSummary,
}

type CheckFn = Box<dyn Fn(&Tolerances, &SummationConfig) -> Result<IdentityCheckResult>>;

struct CatalogEntry {
    id: IdentityId,
    point: PointRecord,
    run: CheckFn,
}

/// Builds the full catalog against a grid. Entry order is deterministic;
/// every identity family appears with at least one instance.
fn build_catalog(grid: &[GridPoint]) -> Vec<CatalogEntry> {
    build_catalog_with(grid, &[32, 48, 64])
}

fn build_catalog_with(grid: &[GridPoint], integral_orders: &[usize]) -> Vec<CatalogEntry> {
    assert!(!grid.is_empty(), "the verification grid must not be empty");
    let mut entries: Vec<CatalogEntry> = Vec::new();
    let rotate = |i: usize| grid[i % grid.len()];

    // Reductions on the whole grid.
    for kind in ReductionKind::ALL {
        for (gi, g) in grid.iter().enumerate() {
            let g = *g;
            let _ = gi;
            entries.push(CatalogEntry {
                id: IdentityId::new(IdentityFamily::Reduction, kind.variant(), kind.detail()),
                point: PointRecord::from_parts(&g.params, Some(&g.v1()), Some(g.point)),
                run: Box::new(move |tols, cfg| check_reduction(kind, &g, cfg, tols.terminating)),
            });
        }
    }

    // Difference and differential formulas, r in {1, 2, 3}.
    let mut slot = 0usize;
    for r in 1..=3usize {
        for which in DiffFormula::ALL_V1 {
            let g = rotate(slot);
            slot += 1;
            // Forward differences need a unit step in their direction.
            let d = match which {
                DiffFormula::DeltaT1 | DiffFormula::DeltaT2 => g.v1_unit_k(),
                _ => g.v1(),
            };
            entries.push(CatalogEntry {
                id: IdentityId::new(
                    which.family(),
                    VariantTag::V1,
                    format!("{}-r{}", which.name(), r),
                ),
                point: PointRecord::from_parts(&g.params, Some(&d), Some(g.point)).with_r(r),
                run: Box::new(move |tols, cfg| {
                    check_diff_formula(which, VariantTag::V1, r, &g.params, &d, g.point, cfg, tols.terminating)
                }),
            });
        }
        for which in DiffFormula::ALL_V2 {
            let g = rotate(slot);
            slot += 1;
            let d = g.v2();
            entries.push(CatalogEntry {
                id: IdentityId::new(
                    which.family(),
                    VariantTag::V2,
                    format!("{}-r{}", which.name(), r),
                ),
                point: PointRecord::from_parts(&g.params, Some(&d), Some(g.point)).with_r(r),
                run: Box::new(move |tols, cfg| {
                    check_diff_formula(which, VariantTag::V2, r, &g.params, &d, g.point, cfg, tols.terminating)
                }),
            });
        }
    }

    // Finite sums, r in {0, 1, 2, 3}.
    for r in 0..=3usize {
        for which in [SummationFormula::FiniteB1, SummationFormula::FiniteB2] {
            for (variant, pick_d) in [
                (VariantTag::V1, GridPoint::v1 as fn(&GridPoint) -> DiscreteParams),
                (VariantTag::V2, GridPoint::v2 as fn(&GridPoint) -> DiscreteParams),
            ] {
                let g = rotate(slot);
                slot += 1;
                let d = pick_d(&g);
                entries.push(CatalogEntry {
                    id: IdentityId::new(which.family(), variant, format!("{}-r{}", which.name(), r)),
                    point: PointRecord::from_parts(&g.params, Some(&d), Some(g.point)).with_r(r),
                    run: Box::new(move |tols, cfg| {
                        check_summation(
                            which,
                            variant,
                            r,
                            &g.params,
                            &d,
                            g.point,
                            Complex64::new(0.0, 0.0),
                            cfg,
                            tols.terminating,
                        )
                    }),
                });
            }
        }
    }

    // Infinite sums at z in {0, 0.3}, 60-term outer truncation.
    for which in [
        SummationFormula::InfiniteA,
        SummationFormula::InfiniteB1,
        SummationFormula::InfiniteB2,
    ] {
        for z_re in [0.0, 0.3] {
            for (variant, pick_d) in [
                (VariantTag::V1, GridPoint::v1 as fn(&GridPoint) -> DiscreteParams),
                (VariantTag::V2, GridPoint::v2 as fn(&GridPoint) -> DiscreteParams),
            ] {
                let g = rotate(slot);
                slot += 1;
                let d = pick_d(&g);
                let z = Complex64::new(z_re, 0.0);
                entries.push(CatalogEntry {
                    id: IdentityId::new(
                        which.family(),
                        variant,
                        format!("{}-z{}", which.name(), z_re),
                    ),
                    point: PointRecord::from_parts(&g.params, Some(&d), Some(g.point)).with_z(z),
                    run: Box::new(move |tols, cfg| {
                        let mut out = check_summation(
                            which, variant, 60, &g.params, &d, g.point, z, cfg, tols.truncated,
                        )?;
                        out.id = IdentityId::new(
                            which.family(),
                            variant,
                            format!("{}-z{}", which.name(), z_re),
                        );
                        Ok(out)
                    }),
                });
            }
        }
    }

    // Recursions, s in {1, 2, 3} (single shared step index).
    for s in 1..=3usize {
        for which in RecursionFormula::ALL {
            for (variant, pick_d) in [
                (
                    VariantTag::V1,
                    GridPoint::v1_single_k as fn(&GridPoint) -> DiscreteParams,
                ),
                (VariantTag::V2, GridPoint::v2 as fn(&GridPoint) -> DiscreteParams),
            ] {
                let g = rotate(slot);
                slot += 1;
                let d = pick_d(&g);
                entries.push(CatalogEntry {
                    id: IdentityId::new(
                        IdentityFamily::Recursion,
                        variant,
                        format!("{}-s{}", which.name(), s),
                    ),
                    point: PointRecord::from_parts(&g.params, Some(&d), Some(g.point)).with_s(s),
                    run: Box::new(move |tols, cfg| {
                        check_recursion(which, variant, s, &g.params, &d, g.point, cfg, tols.terminating)
                    }),
                });
            }
        }
    }

    // Ladder relations and their pairwise combinations.
    for flavor in [LadderFlavor::Differential, LadderFlavor::Difference] {
        for (variant, pick_d) in [
            (VariantTag::V1, GridPoint::v1 as fn(&GridPoint) -> DiscreteParams),
            (VariantTag::V2, GridPoint::v2 as fn(&GridPoint) -> DiscreteParams),
        ] {
            for tag in ALL_LADDER_TAGS {
                let g = rotate(slot);
                slot += 1;
                let d = pick_d(&g);
                entries.push(CatalogEntry {
                    id: IdentityId::new(
                        match flavor {
                            LadderFlavor::Differential => IdentityFamily::LadderDifferential,
                            LadderFlavor::Difference => IdentityFamily::LadderDifference,
                        },
                        variant,
                        tag.name(),
                    ),
                    point: PointRecord::from_parts(&g.params, Some(&d), Some(g.point)),
                    run: Box::new(move |tols, cfg| {
                        check_ladder(tag, flavor, variant, &g.params, &d, g.point, cfg, tols.terminating)
                    }),
                });
            }
            for (i, &first) in ALL_LADDER_TAGS.iter().enumerate() {
                for &second in ALL_LADDER_TAGS.iter().skip(i + 1) {
                    let g = rotate(slot);
                    slot += 1;
                    let d = pick_d(&g);
                    entries.push(CatalogEntry {
                        id: IdentityId::new(
                            match flavor {
                                LadderFlavor::Differential => IdentityFamily::PairwiseDifferential,
                                LadderFlavor::Difference => IdentityFamily::PairwiseDifference,
                            },
                            variant,
                            format!("{}&{}", first.name(), second.name()),
                        ),
                        point: PointRecord::from_parts(&g.params, Some(&d), Some(g.point)),
                        run: Box::new(move |tols, cfg| {
                            check_pairwise(
                                first, second, flavor, variant, &g.params, &d, g.point, cfg,
                                tols.terminating,
                            )
                        }),
                    });
                }
            }
        }
    }

    // Humbert limits.
    for kind in [HumbertKind::Psi1, HumbertKind::Psi2] {
        for (variant, pick_d) in [
            (
                VariantTag::V1,
                GridPoint::v1_unit_k as fn(&GridPoint) -> DiscreteParams,
            ),
            (VariantTag::V2, GridPoint::v2 as fn(&GridPoint) -> DiscreteParams),
        ] {
            let g = rotate(slot);
            slot += 1;
            let d = pick_d(&g);
            let kind_tag = match kind {
                HumbertKind::Psi1 => "psi1",
                HumbertKind::Psi2 => "psi2",
            };
            entries.push(CatalogEntry {
                id: IdentityId::new(IdentityFamily::HumbertLimit, variant, kind_tag),
                point: PointRecord::from_parts(&g.params, Some(&d), Some(g.point)),
                run: Box::new(move |_tols, cfg| {
                    check_humbert_limit(kind, &g.params, &d, g.point, &[1e-2, 1e-3, 1e-4], cfg)
                }),
            });
        }
    }

    // Integral representations at their smoke points.
    for rep in IntegralRepId::ALL {
        let (params, d, p) = smoke_point(rep);
        let orders = integral_orders.to_vec();
        entries.push(CatalogEntry {
            id: IdentityId::new(IdentityFamily::IntegralRep, rep.variant(), rep.detail()),
            point: PointRecord::from_parts(&params, Some(&d), Some(p)),
            run: Box::new(move |_tols, _cfg| verify_integral_rep(rep, &params, &d, p, &orders)),
        });
    }

    // Difference equations on five grid points each.
    for which in [
        DifferenceEquation::V1X,
        DifferenceEquation::V1Y,
        DifferenceEquation::V2X,
        DifferenceEquation::V2Y,
    ] {
        let (variant, is_v2) = match which {
            DifferenceEquation::V1X | DifferenceEquation::V1Y => (VariantTag::V1, false),
            _ => (VariantTag::V2, true),
        };
        for gi in 0..5usize.min(grid.len()) {
            let g = rotate(gi);
            let d = if is_v2 { g.v2() } else { g.v1() };
            entries.push(CatalogEntry {
                id: IdentityId::new(IdentityFamily::DifferenceEq, variant, which.detail()),
                point: PointRecord::from_parts(&g.params, Some(&d), Some(g.point)),
                run: Box::new(move |_tols, cfg| {
                    residual_difference_equation(which, &g.params, &d, g.point, cfg)
                }),
            });
        }
    }

    entries
}

/// All catalog ids against a grid, in run order (with repeats for
/// identities checked at several points).
pub fn catalog_ids(grid: &[GridPoint]) -> Vec<IdentityId> {
    build_catalog(grid).into_iter().map(|e| e.id).collect()
}

/// Runs every cataloged identity whose id passes the filter.
///
/// Precondition violations become skip rows (vacuously passing, marked in
/// the notes); any other evaluation error becomes a failing row. Results
/// are sorted by id (stable, so per-id point order is preserved).
pub fn run_suite(
    filter: &dyn Fn(&IdentityId) -> bool,
    grid: &[GridPoint],
    tols: &Tolerances,
    cfg: &SummationConfig,
) -> SuiteReport {
    run_suite_with(filter, grid, tols, cfg, &[32, 48, 64])
}

/// [`run_suite`] with explicit quadrature orders for the
/// integral-representation family.
pub fn run_suite_with(
    filter: &dyn Fn(&IdentityId) -> bool,
    grid: &[GridPoint],
    tols: &Tolerances,
    cfg: &SummationConfig,
    integral_orders: &[usize],
) -> SuiteReport {
    let mut results = Vec::new();
    for entry in build_catalog_with(grid, integral_orders) {
        if !filter(&entry.id) {
            continue;
        }
        let outcome = match (entry.run)(tols, cfg) {
            Ok(res) => res,
            Err(EvalError::Precondition(reason)) => {
                IdentityCheckResult::skipped(entry.id.clone(), entry.point.clone(), reason)
            }
            Err(err) => IdentityCheckResult {
                id: entry.id.clone(),
                point: entry.point.clone(),
                lhs: Complex64::new(f64::NAN, 0.0),
                rhs: Complex64::new(f64::NAN, 0.0),
                abs_residual: f64::INFINITY,
                rel_residual: f64::INFINITY,
                passed: false,
                notes: format!("evaluation error: {err}"),
            },
        };
        results.push(outcome);
    }
    results.sort_by(|a, b| a.id.cmp(&b.id));
    let mut summary = SuiteSummary::default();
    for r in &results {
        if r.is_skipped() {
            summary.skip += 1;
        } else if r.passed {
            summary.pass += 1;
        } else {
            summary.fail += 1;
        }
    }
    SuiteReport { results, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_deterministic_and_in_region() {
        let g1 = default_grid(0);
        let g2 = default_grid(0);
        assert_eq!(g1.len(), 10);
        for (a, b) in g1.iter().zip(&g2) {
            assert_eq!(a.params, b.params);
            assert_eq!(a.point, b.point);
        }
        for g in &g1 {
            assert!(g.point.x.norm() + g.point.y.norm() <= 0.6 + 1e-12);
            for v in [g.params.a, g.params.b1, g.params.b2, g.params.c1, g.params.c2] {
                let frac = (v.re - v.re.round()).abs();
                assert!(frac >= 0.1 - 1e-12, "parameter too close to integer: {v}");
            }
        }
        let jittered = default_grid(1);
        assert_ne!(g1[0].params, jittered[0].params);
    }

    #[test]
    fn reductions_pass_on_default_grid() {
        let grid = default_grid(0);
        let cfg = SummationConfig::default();
        for kind in ReductionKind::ALL {
            for g in &grid {
                let out = check_reduction(kind, g, &cfg, 1e-12).unwrap();
                assert!(out.passed, "{kind:?} at {:?}: rel {}", g.point, out.rel_residual);
            }
        }
    }

    #[test]
    fn empty_filter_yields_empty_report() {
        let grid = default_grid(0);
        let report = run_suite(
            &|_| false,
            &grid,
            &Tolerances::default(),
            &SummationConfig::default(),
        );
        assert!(report.results.is_empty());
        assert_eq!(report.summary.pass + report.summary.fail + report.summary.skip, 0);
    }

    #[test]
    fn single_family_filter_routes_correctly() {
        let grid = default_grid(0);
        let report = run_suite(
            &|id| id.family == IdentityFamily::Reduction,
            &grid,
            &Tolerances::default(),
            &SummationConfig::default(),
        );
        assert_eq!(report.results.len(), 70);
        assert!(report.results.iter().all(|r| r.id.family == IdentityFamily::Reduction));
        assert_eq!(report.summary.fail, 0);
    }

    #[test]
    fn catalog_covers_every_family_and_is_large() {
        let grid = default_grid(0);
        let ids = catalog_ids(&grid);
        assert!(ids.len() > 250, "catalog has {} checks", ids.len());
        for family in IdentityFamily::ALL {
            assert!(
                ids.iter().any(|id| id.family == family),
                "family {family} missing from catalog"
            );
        }
        // Ladder families: 10 basic + 45 pairwise per flavor per variant.
        for (family, expected) in [
            (IdentityFamily::LadderDifferential, 20),
            (IdentityFamily::LadderDifference, 20),
            (IdentityFamily::PairwiseDifferential, 90),
            (IdentityFamily::PairwiseDifference, 90),
        ] {
            let n = ids.iter().filter(|id| id.family == family).count();
            assert_eq!(n, expected, "{family}");
        }
    }
}
