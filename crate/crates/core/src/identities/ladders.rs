//! The ten parameter ladder relations and the pairwise contiguous relations
//! generated by combining any two of them.
//!
//! Every ladder has one of two shapes. "Raising" shape: a scalar times the
//! shifted function equals a first-order operator applied to the function,
//! `s F(σ) = R F`. "Lowering" shape: a first-order operator applied to the
//! shifted function equals a scalar times the function, `P F(σ) = w F`.
//! Combining two relations eliminates F:
//!
//!   raise + raise:  s_i (R_j F(σ_i)) - s_j (R_i F(σ_j)) = 0
//!   lower + lower:  w_j (P_i F(σ_i)) - w_i (P_j F(σ_j)) = 0
//!   raise + lower:  s_i w_j F(σ_i)   - (R_i P_j) F(σ_j) = 0
//!
//! which reproduces the classical explicit lists relation by relation. The
//! differential flavor uses θ = x∂x and φ = y∂y; the difference flavor uses
//! Θ_{t1}/k1 and Θ_{t2}/k2 for the first analogue, and Θ_t/k for the a
//! ladder of the second analogue (whose b and c ladders stay differential).

use super::{IdentityCheckResult, IdentityFamily, IdentityId, PointRecord, VariantTag};
use crate::appell::{DiscreteParams, EvalPoint, ParameterSet};
use crate::error::{EvalError, Result};
use crate::operators::{appell_operand, apply, EvalContext, OperatorExpr};
use crate::series::SummationConfig;
use num_complex::Complex64;

/// The ten parameter ladders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LadderTag {
    APlus,
    AMinus,
    B1Plus,
    B1Minus,
    B2Plus,
    B2Minus,
    C1Plus,
    C1Minus,
    C2Plus,
    C2Minus,
}

pub const ALL_LADDER_TAGS: [LadderTag; 10] = [
    LadderTag::APlus,
    LadderTag::AMinus,
    LadderTag::B1Plus,
    LadderTag::B1Minus,
    LadderTag::B2Plus,
    LadderTag::B2Minus,
    LadderTag::C1Plus,
    LadderTag::C1Minus,
    LadderTag::C2Plus,
    LadderTag::C2Minus,
];

impl LadderTag {
    pub fn name(&self) -> &'static str {
        match self {
            LadderTag::APlus => "a+",
            LadderTag::AMinus => "a-",
            LadderTag::B1Plus => "b1+",
            LadderTag::B1Minus => "b1-",
            LadderTag::B2Plus => "b2+",
            LadderTag::B2Minus => "b2-",
            LadderTag::C1Plus => "c1+",
            LadderTag::C1Minus => "c1-",
            LadderTag::C2Plus => "c2+",
            LadderTag::C2Minus => "c2-",
        }
    }

    pub fn parse(s: &str) -> Option<LadderTag> {
        ALL_LADDER_TAGS.into_iter().find(|t| t.name() == s)
    }
}

/// Operator flavor of a ladder set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderFlavor {
    Differential,
    Difference,
}

impl LadderFlavor {
    pub fn name(&self) -> &'static str {
        match self {
            LadderFlavor::Differential => "differential",
            LadderFlavor::Difference => "difference",
        }
    }
}

/// Parameter-direction of a ladder: a (joint), 1 (b1/c1), or 2 (b2/c2).
#[derive(Debug, Clone, Copy)]
enum Direction {
    Joint,
    First,
    Second,
}

/// The grading operator for a direction under a flavor/variant choice.
fn direction_operator(
    dir: Direction,
    flavor: LadderFlavor,
    variant: VariantTag,
    d: &DiscreteParams,
) -> Result<OperatorExpr> {
    use OperatorExpr as Op;
    let theta_scaled = |slot: usize, k: usize| -> Result<OperatorExpr> {
        if k == 0 {
            return Err(EvalError::Precondition(
                "difference ladders divide by the step index; k = 0 is unspecified".into(),
            ));
        }
        Ok(Op::ScalarMul(Complex64::new(1.0 / k as f64, 0.0)).after(Op::Theta(slot)))
    };
    match flavor {
        LadderFlavor::Differential => Ok(match dir {
            Direction::Joint => Op::Add(vec![Op::EulerX, Op::EulerY]),
            Direction::First => Op::EulerX,
            Direction::Second => Op::EulerY,
        }),
        LadderFlavor::Difference => match variant {
            VariantTag::V1 => {
                let (k1, k2) = match *d {
                    DiscreteParams::V1 { k1, k2, .. } => (k1, k2),
                    DiscreteParams::V3 { k, .. } => (k, k),
                    DiscreteParams::V2 { .. } => {
                        return Err(EvalError::Precondition(
                            "first-analogue difference ladders need V1/V3 data".into(),
                        ))
                    }
                };
                Ok(match dir {
                    Direction::Joint => {
                        Op::Add(vec![theta_scaled(0, k1)?, theta_scaled(1, k2)?])
                    }
                    Direction::First => theta_scaled(0, k1)?,
                    Direction::Second => theta_scaled(1, k2)?,
                })
            }
            VariantTag::V2 => {
                let k = match *d {
                    DiscreteParams::V2 { k, .. } => k,
                    _ => {
                        return Err(EvalError::Precondition(
                            "second-analogue difference ladders need V2 data".into(),
                        ))
                    }
                };
                // Only the joint grading has a discrete form for the second
                // analogue; the b and c ladders stay differential.
                Ok(match dir {
                    Direction::Joint => theta_scaled(0, k)?,
                    Direction::First => Op::EulerX,
                    Direction::Second => Op::EulerY,
                })
            }
        },
    }
}

/// One ladder relation instantiated at a parameter set.
struct LadderRelation {
    /// Raising shape when true: s F(σ) = R F. Lowering: P F(σ) = w F.
    raising: bool,
    /// The scalar side (s for raising, w for lowering).
    scalar: Complex64,
    /// The operator side (R for raising, P for lowering).
    operator: OperatorExpr,
    /// Parameters of the shifted function F(σ).
    shifted: ParameterSet,
}

fn build_relation(
    tag: LadderTag,
    flavor: LadderFlavor,
    variant: VariantTag,
    params: &ParameterSet,
    d: &DiscreteParams,
) -> Result<LadderRelation> {
    let one = Complex64::new(1.0, 0.0);
    let (dir, raising, scalar, constant, shifted) = match tag {
        LadderTag::APlus => (
            Direction::Joint,
            true,
            params.a,
            params.a,
            ParameterSet {
                a: params.a + 1.0,
                ..*params
            },
        ),
        LadderTag::AMinus => (
            Direction::Joint,
            false,
            params.a - one,
            params.a - one,
            ParameterSet {
                a: params.a - 1.0,
                ..*params
            },
        ),
        LadderTag::B1Plus => (
            Direction::First,
            true,
            params.b1,
            params.b1,
            ParameterSet {
                b1: params.b1 + 1.0,
                ..*params
            },
        ),
        LadderTag::B1Minus => (
            Direction::First,
            false,
            params.b1 - one,
            params.b1 - one,
            ParameterSet {
                b1: params.b1 - 1.0,
                ..*params
            },
        ),
        LadderTag::B2Plus => (
            Direction::Second,
            true,
            params.b2,
            params.b2,
            ParameterSet {
                b2: params.b2 + 1.0,
                ..*params
            },
        ),
        LadderTag::B2Minus => (
            Direction::Second,
            false,
            params.b2 - one,
            params.b2 - one,
            ParameterSet {
                b2: params.b2 - 1.0,
                ..*params
            },
        ),
        LadderTag::C1Plus => (
            Direction::First,
            false,
            params.c1,
            params.c1,
            ParameterSet {
                c1: params.c1 + 1.0,
                ..*params
            },
        ),
        LadderTag::C1Minus => (
            Direction::First,
            true,
            params.c1 - one,
            params.c1 - one,
            ParameterSet {
                c1: params.c1 - 1.0,
                ..*params
            },
        ),
        LadderTag::C2Plus => (
            Direction::Second,
            false,
            params.c2,
            params.c2,
            ParameterSet {
                c2: params.c2 + 1.0,
                ..*params
            },
        ),
        LadderTag::C2Minus => (
            Direction::Second,
            true,
            params.c2 - one,
            params.c2 - one,
            ParameterSet {
                c2: params.c2 - 1.0,
                ..*params
            },
        ),
    };
    let grading = direction_operator(dir, flavor, variant, d)?;
    let operator = OperatorExpr::linear(constant, vec![(one, grading)]);
    Ok(LadderRelation {
        raising,
        scalar,
        operator,
        shifted,
    })
}

fn ladder_family(flavor: LadderFlavor, pairwise: bool) -> IdentityFamily {
    match (flavor, pairwise) {
        (LadderFlavor::Differential, false) => IdentityFamily::LadderDifferential,
        (LadderFlavor::Difference, false) => IdentityFamily::LadderDifference,
        (LadderFlavor::Differential, true) => IdentityFamily::PairwiseDifferential,
        (LadderFlavor::Difference, true) => IdentityFamily::PairwiseDifference,
    }
}

/// Checks one basic ladder relation at a point.
#[allow(clippy::too_many_arguments)]
pub fn check_ladder(
    tag: LadderTag,
    flavor: LadderFlavor,
    variant: VariantTag,
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
    tolerance: f64,
) -> Result<IdentityCheckResult> {
    let rel = build_relation(tag, flavor, variant, params, d)?;
    let ctx = EvalContext::for_params(d, p);
    let base = appell_operand(*params, *d, *cfg);
    let shifted = appell_operand(rel.shifted, *d, *cfg);
    let (lhs, rhs) = if rel.raising {
        // s F(σ) = R F
        (rel.scalar * shifted.eval(&ctx)?, apply(&rel.operator, &base, &ctx)?)
    } else {
        // P F(σ) = w F
        (apply(&rel.operator, &shifted, &ctx)?, rel.scalar * base.eval(&ctx)?)
    };
    Ok(IdentityCheckResult::from_sides(
        IdentityId::new(ladder_family(flavor, false), variant, tag.name()),
        PointRecord::from_parts(params, Some(d), Some(p)),
        lhs,
        rhs,
        tolerance,
    ))
}

/// Checks one generated pairwise contiguous relation at a point.
#[allow(clippy::too_many_arguments)]
pub fn check_pairwise(
    first: LadderTag,
    second: LadderTag,
    flavor: LadderFlavor,
    variant: VariantTag,
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
    tolerance: f64,
) -> Result<IdentityCheckResult> {
    if first == second {
        return Err(EvalError::Precondition(
            "pairwise relations need two distinct ladders".into(),
        ));
    }
    let ri = build_relation(first, flavor, variant, params, d)?;
    let rj = build_relation(second, flavor, variant, params, d)?;
    let ctx = EvalContext::for_params(d, p);
    let fi = appell_operand(ri.shifted, *d, *cfg);
    let fj = appell_operand(rj.shifted, *d, *cfg);

    let (lhs, rhs) = match (ri.raising, rj.raising) {
        (true, true) => (
            ri.scalar * apply(&rj.operator, &fi, &ctx)?,
            rj.scalar * apply(&ri.operator, &fj, &ctx)?,
        ),
        (false, false) => (
            rj.scalar * apply(&ri.operator, &fi, &ctx)?,
            ri.scalar * apply(&rj.operator, &fj, &ctx)?,
        ),
        (true, false) => (
            ri.scalar * rj.scalar * fi.eval(&ctx)?,
            apply(&ri.operator.clone().after(rj.operator.clone()), &fj, &ctx)?,
        ),
        (false, true) => (
            rj.scalar * ri.scalar * fj.eval(&ctx)?,
            apply(&rj.operator.clone().after(ri.operator.clone()), &fi, &ctx)?,
        ),
    };
    let detail = format!("{}&{}", first.name(), second.name());
    Ok(IdentityCheckResult::from_sides(
        IdentityId::new(ladder_family(flavor, true), variant, detail),
        PointRecord::from_parts(params, Some(d), Some(p)),
        lhs,
        rhs,
        tolerance,
    ))
}

/// The catalog ids of a flavor/variant ladder set: the 10 basic relations
/// followed by the 45 unordered pairwise combinations in canonical order.
pub fn generate_ladder_relations(flavor: LadderFlavor, variant: VariantTag) -> Vec<IdentityId> {
    let mut out = Vec::with_capacity(55);
    for tag in ALL_LADDER_TAGS {
        out.push(IdentityId::new(
            ladder_family(flavor, false),
            variant,
            tag.name(),
        ));
    }
    for (i, &a) in ALL_LADDER_TAGS.iter().enumerate() {
        for &b in ALL_LADDER_TAGS.iter().skip(i + 1) {
            out.push(IdentityId::new(
                ladder_family(flavor, true),
                variant,
                format!("{}&{}", a.name(), b.name()),
            ));
        }
    }
    out
}

/// The reference enumeration of pairwise relations, as ladder tag pairs in
/// the classical list order, used by the completeness cross-check. The
/// differential flavors and the first-analogue difference flavor enumerate
/// all 45 combinations; the second-analogue difference flavor enumerates
/// the 17 relations that involve the a ladder.
pub fn explicit_pair_list(flavor: LadderFlavor, variant: VariantTag) -> Vec<(LadderTag, LadderTag)> {
    use LadderTag::*;
    let full: Vec<(LadderTag, LadderTag)> = vec![
        (APlus, AMinus),
        (APlus, B1Minus),
        (APlus, B2Minus),
        (APlus, C1Plus),
        (APlus, C2Plus),
        (APlus, B1Plus),
        (APlus, B2Plus),
        (APlus, C1Minus),
        (APlus, C2Minus),
        (AMinus, B1Plus),
        (AMinus, B2Plus),
        (AMinus, C1Minus),
        (AMinus, C2Minus),
        (AMinus, B1Minus),
        (AMinus, B2Minus),
        (AMinus, C1Plus),
        (AMinus, C2Plus),
        (B1Plus, B1Minus),
        (B1Plus, B2Plus),
        (B1Plus, B2Minus),
        (B1Plus, C1Minus),
        (B1Plus, C2Minus),
        (B1Plus, C1Plus),
        (B1Plus, C2Plus),
        (B2Plus, B1Minus),
        (B2Plus, B2Minus),
        (B2Plus, C1Minus),
        (B2Plus, C2Minus),
        (B2Plus, C1Plus),
        (B2Plus, C2Plus),
        (B1Minus, B2Minus),
        (B1Minus, C1Minus),
        (B1Minus, C2Minus),
        (B1Minus, C1Plus),
        (B1Minus, C2Plus),
        (B2Minus, C1Minus),
        (B2Minus, C2Minus),
        (B2Minus, C1Plus),
        (B2Minus, C2Plus),
        (C1Minus, C1Plus),
        (C1Minus, C2Minus),
        (C1Minus, C2Plus),
        (C1Plus, C2Minus),
        (C1Plus, C2Plus),
        (C2Minus, C2Plus),
    ];
    match (flavor, variant) {
        (LadderFlavor::Difference, VariantTag::V2) => full
            .into_iter()
            .filter(|&(a, b)| a == APlus || a == AMinus || b == APlus || b == AMinus)
            .collect(),
        _ => full,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point() -> (ParameterSet, DiscreteParams, DiscreteParams, EvalPoint) {
        (
            ParameterSet::real(1.3, 0.7, 1.1, 2.2, 1.9),
            DiscreteParams::V1 {
                t1: c(3.0, 0.0),
                t2: c(2.0, 0.0),
                k1: 1,
                k2: 2,
            },
            DiscreteParams::V2 { t: c(4.0, 0.0), k: 2 },
            EvalPoint::real(0.25, 0.2),
        )
    }

    #[test]
    fn catalog_counts() {
        for flavor in [LadderFlavor::Differential, LadderFlavor::Difference] {
            for variant in [VariantTag::V1, VariantTag::V2] {
                let ids = generate_ladder_relations(flavor, variant);
                assert_eq!(ids.len(), 55);
                let basic = ids
                    .iter()
                    .filter(|id| {
                        id.family == IdentityFamily::LadderDifferential
                            || id.family == IdentityFamily::LadderDifference
                    })
                    .count();
                assert_eq!(basic, 10);
            }
        }
    }

    #[test]
    fn generated_set_covers_listed_relations() {
        for (flavor, variant, expected_len) in [
            (LadderFlavor::Differential, VariantTag::V1, 45),
            (LadderFlavor::Differential, VariantTag::V2, 45),
            (LadderFlavor::Difference, VariantTag::V1, 45),
            (LadderFlavor::Difference, VariantTag::V2, 17),
        ] {
            let listed = explicit_pair_list(flavor, variant);
            assert_eq!(listed.len(), expected_len, "{flavor:?} {variant:?}");
            let generated: std::collections::BTreeSet<String> =
                generate_ladder_relations(flavor, variant)
                    .into_iter()
                    .filter(|id| id.detail.contains('&'))
                    .map(|id| id.detail)
                    .collect();
            for (a, b) in listed {
                let fwd = format!("{}&{}", a.name(), b.name());
                let rev = format!("{}&{}", b.name(), a.name());
                assert!(
                    generated.contains(&fwd) || generated.contains(&rev),
                    "{flavor:?} {variant:?} misses {fwd}"
                );
            }
        }
    }

    #[test]
    fn basic_ladders_hold() {
        let (params, d1, d2, p) = point();
        let cfg = SummationConfig::default();
        for tag in ALL_LADDER_TAGS {
            for flavor in [LadderFlavor::Differential, LadderFlavor::Difference] {
                let r1 = check_ladder(tag, flavor, VariantTag::V1, &params, &d1, p, &cfg, 1e-10)
                    .unwrap();
                assert!(r1.passed, "{flavor:?} v1 {tag:?}: {}", r1.rel_residual);
                let r2 = check_ladder(tag, flavor, VariantTag::V2, &params, &d2, p, &cfg, 1e-10)
                    .unwrap();
                assert!(r2.passed, "{flavor:?} v2 {tag:?}: {}", r2.rel_residual);
            }
        }
    }

    #[test]
    fn spot_check_pairwise_final_list_entry() {
        // (c2-, c2+) must reproduce
        // c2 (c2-1) F(c2-1) - (c2+φ-1)(c2+φ) F(c2+1) = 0.
        let (params, d1, _, p) = point();
        let cfg = SummationConfig::default();
        let out = check_pairwise(
            LadderTag::C2Plus,
            LadderTag::C2Minus,
            LadderFlavor::Differential,
            VariantTag::V1,
            &params,
            &d1,
            p,
            &cfg,
            1e-9,
        )
        .unwrap();
        assert!(out.passed, "{}", out.rel_residual);
    }

    #[test]
    fn ladder_mutual_inverse() {
        // The a+ ladder raises term (m,n) by (a+m+n)/a; dividing the raised
        // function's terms by the same factor must return the original
        // value, so the operator form and its term-wise inverse round-trip.
        use crate::appell::eval_discrete_f2_weighted;
        let (params, d1, _, p) = point();
        let cfg = SummationConfig::default();
        let ctx = EvalContext::for_params(&d1, p);
        let base = appell_operand(params, d1, cfg);
        let rel_up =
            build_relation(LadderTag::APlus, LadderFlavor::Differential, VariantTag::V1, &params, &d1)
                .unwrap();
        let raised_value = apply(&rel_up.operator, &base, &ctx).unwrap() / rel_up.scalar;
        let raised_params = rel_up.shifted;
        let shifted_direct = appell_operand(raised_params, d1, cfg).eval(&ctx).unwrap();
        let diff_up = (raised_value - shifted_direct).norm() / shifted_direct.norm().max(1.0);
        assert!(diff_up < 1e-10, "{raised_value} vs {shifted_direct}");

        let a = params.a;
        let recovered = eval_discrete_f2_weighted(&raised_params, &d1, p, &cfg, &|i| {
            a / (a + (i.m + i.n) as f64)
        })
        .unwrap()
        .value;
        let direct = base.eval(&ctx).unwrap();
        let diff = (recovered - direct).norm() / direct.norm().max(1.0);
        assert!(diff < 1e-10, "{recovered} vs {direct}");
    }

    #[test]
    fn pairwise_rejects_equal_tags() {
        let (params, d1, _, p) = point();
        let out = check_pairwise(
            LadderTag::APlus,
            LadderTag::APlus,
            LadderFlavor::Differential,
            VariantTag::V1,
            &params,
            &d1,
            p,
            &SummationConfig::default(),
            1e-9,
        );
        assert!(matches!(out, Err(EvalError::Precondition(_))));
    }

    #[test]
    fn difference_ladders_reject_zero_step() {
        let (params, _, _, p) = point();
        let d = DiscreteParams::V1 {
            t1: c(3.0, 0.0),
            t2: c(2.0, 0.0),
            k1: 0,
            k2: 1,
        };
        let out = check_ladder(
            LadderTag::APlus,
            LadderFlavor::Difference,
            VariantTag::V1,
            &params,
            &d,
            p,
            &SummationConfig::default(),
            1e-10,
        );
        assert!(matches!(out, Err(EvalError::Precondition(_))));
    }
}
