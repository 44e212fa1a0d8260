//! Residual checks for the difference/differential formulas, the finite and
//! infinite summation formulas, and the s-step recursion formulas.

use super::{IdentityCheckResult, IdentityFamily, IdentityId, PointRecord, VariantTag};
use crate::appell::{
    eval_discrete_f2, eval_discrete_f2_weighted, DiscreteParams, EvalPoint, ParameterSet,
};
use crate::error::{EvalError, Result};
use crate::gamma::{discrete_factor, is_near_nonpositive_integer, pochhammer};
use crate::operators::{appell_operand, apply, EvalContext, OperatorExpr};
use crate::series::{SummationConfig, TermIndex};
use num_complex::Complex64;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn f_value(
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
) -> Result<Complex64> {
    Ok(eval_discrete_f2(params, d, p, cfg)?.value)
}

fn f_weighted(
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
    w: &dyn Fn(TermIndex) -> Complex64,
) -> Result<Complex64> {
    Ok(eval_discrete_f2_weighted(params, d, p, cfg, w)?.value)
}

/// Parameter shifts by whole steps.
fn shifted_params(base: &ParameterSet, da: f64, db1: f64, db2: f64, dc1: f64, dc2: f64) -> ParameterSet {
    ParameterSet {
        a: base.a + da,
        b1: base.b1 + db1,
        b2: base.b2 + db2,
        c1: base.c1 + dc1,
        c2: base.c2 + dc2,
    }
}

/// t1 -> t1 - steps*k1 (first analogue).
fn lower_t1(d: &DiscreteParams, steps: usize) -> Result<DiscreteParams> {
    match *d {
        DiscreteParams::V1 { t1, t2, k1, k2 } => Ok(DiscreteParams::V1 {
            t1: t1 - (steps * k1) as f64,
            t2,
            k1,
            k2,
        }),
        DiscreteParams::V3 { t1, t2, k } => Ok(DiscreteParams::V3 {
            t1: t1 - (steps * k) as f64,
            t2,
            k,
        }),
        DiscreteParams::V2 { .. } => Err(EvalError::Precondition(
            "t1 shift needs V1/V3 discrete data".into(),
        )),
    }
}

/// t2 -> t2 - steps*k2 (first analogue).
fn lower_t2(d: &DiscreteParams, steps: usize) -> Result<DiscreteParams> {
    match *d {
        DiscreteParams::V1 { t1, t2, k1, k2 } => Ok(DiscreteParams::V1 {
            t1,
            t2: t2 - (steps * k2) as f64,
            k1,
            k2,
        }),
        DiscreteParams::V3 { t1, t2, k } => Ok(DiscreteParams::V3 {
            t1,
            t2: t2 - (steps * k) as f64,
            k,
        }),
        DiscreteParams::V2 { .. } => Err(EvalError::Precondition(
            "t2 shift needs V1/V3 discrete data".into(),
        )),
    }
}

/// t -> t - steps*k (second analogue).
fn lower_t(d: &DiscreteParams, steps: usize) -> Result<DiscreteParams> {
    match *d {
        DiscreteParams::V2 { t, k } => Ok(DiscreteParams::V2 {
            t: t - (steps * k) as f64,
            k,
        }),
        _ => Err(EvalError::Precondition(
            "joint t shift needs V2 discrete data".into(),
        )),
    }
}

/// The discrete data of the x direction: (t, k) pairs per variant.
fn x_direction(d: &DiscreteParams) -> (Complex64, usize) {
    match *d {
        DiscreteParams::V1 { t1, k1, .. } => (t1, k1),
        DiscreteParams::V3 { t1, k, .. } => (t1, k),
        DiscreteParams::V2 { t, k } => (t, k),
    }
}

fn y_direction(d: &DiscreteParams) -> (Complex64, usize) {
    match *d {
        DiscreteParams::V1 { t2, k2, .. } => (t2, k2),
        DiscreteParams::V3 { t2, k, .. } => (t2, k),
        DiscreteParams::V2 { t, k } => (t, k),
    }
}

fn check_variant_data(variant: VariantTag, d: &DiscreteParams) -> Result<()> {
    let ok = match variant {
        VariantTag::V1 => matches!(d, DiscreteParams::V1 { .. } | DiscreteParams::V3 { .. }),
        VariantTag::V2 => matches!(d, DiscreteParams::V2 { .. }),
    };
    if ok {
        Ok(())
    } else {
        Err(EvalError::Precondition(format!(
            "variant {variant} does not match discrete data {d:?}"
        )))
    }
}

/// The difference and differential formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffFormula {
    /// r-fold forward difference in t1 (needs k1 = 1, first analogue only).
    DeltaT1,
    /// r-fold forward difference in t2 (needs k2 = 1, first analogue only).
    DeltaT2,
    /// The theta form: x^r (∂/∂x)^r, i.e. θ(θ-1)...(θ-r+1).
    ThetaPow,
    /// The phi form: y^r (∂/∂y)^r.
    PhiPow,
    /// (∂/∂x)^r of the x^{b1+r-1}-conjugated product.
    DxConjB1,
    /// (∂/∂y)^r of the y^{b2+r-1}-conjugated product.
    DyConjB2,
    /// (∂/∂x)^r of the x^{a+r-1}-conjugated product at the point (x, xy).
    DxConjA,
    /// (∂/∂y)^r of the y^{a+r-1}-conjugated product at the point (xy, y).
    DyConjA,
    /// (∂/∂x)^r of the x^{c1-1}-conjugated product.
    DxConjC1,
    /// (∂/∂y)^r of the y^{c2-1}-conjugated product.
    DyConjC2,
}

impl DiffFormula {
    pub const ALL_V1: [DiffFormula; 10] = [
        DiffFormula::DeltaT1,
        DiffFormula::DeltaT2,
        DiffFormula::ThetaPow,
        DiffFormula::PhiPow,
        DiffFormula::DxConjB1,
        DiffFormula::DyConjB2,
        DiffFormula::DxConjA,
        DiffFormula::DyConjA,
        DiffFormula::DxConjC1,
        DiffFormula::DyConjC2,
    ];

    /// The second analogue has no forward-difference formulas.
    pub const ALL_V2: [DiffFormula; 8] = [
        DiffFormula::ThetaPow,
        DiffFormula::PhiPow,
        DiffFormula::DxConjB1,
        DiffFormula::DyConjB2,
        DiffFormula::DxConjA,
        DiffFormula::DyConjA,
        DiffFormula::DxConjC1,
        DiffFormula::DyConjC2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DiffFormula::DeltaT1 => "delta-t1",
            DiffFormula::DeltaT2 => "delta-t2",
            DiffFormula::ThetaPow => "theta",
            DiffFormula::PhiPow => "phi",
            DiffFormula::DxConjB1 => "dx-b1",
            DiffFormula::DyConjB2 => "dy-b2",
            DiffFormula::DxConjA => "dx-a",
            DiffFormula::DyConjA => "dy-a",
            DiffFormula::DxConjC1 => "dx-c1",
            DiffFormula::DyConjC2 => "dy-c2",
        }
    }

    pub fn family(&self) -> IdentityFamily {
        match self {
            DiffFormula::DeltaT1 | DiffFormula::DeltaT2 | DiffFormula::ThetaPow | DiffFormula::PhiPow => {
                IdentityFamily::DiffOpFormula
            }
            _ => IdentityFamily::DiffFormula,
        }
    }
}

/// Checks one difference/differential formula at a point.
#[allow(clippy::too_many_arguments)]
pub fn check_diff_formula(
    which: DiffFormula,
    variant: VariantTag,
    r: usize,
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
    tolerance: f64,
) -> Result<IdentityCheckResult> {
    if r == 0 {
        return Err(EvalError::Precondition("formula order r must be >= 1".into()));
    }
    check_variant_data(variant, d)?;
    let id = IdentityId::new(which.family(), variant, format!("{}-r{}", which.name(), r));
    let record = PointRecord::from_parts(params, Some(d), Some(p)).with_r(r);
    let rf = r as f64;

    let (lhs, rhs) = match which {
        DiffFormula::DeltaT1 | DiffFormula::DeltaT2 => {
            if variant == VariantTag::V2 {
                return Err(EvalError::Precondition(
                    "the second analogue has no forward-difference formula".into(),
                ));
            }
            let in_x = which == DiffFormula::DeltaT1;
            let (_, k_dir) = if in_x { x_direction(d) } else { y_direction(d) };
            if k_dir != 1 {
                return Err(EvalError::Precondition(format!(
                    "forward-difference formula needs step index 1 in its direction, got {k_dir}"
                )));
            }
            let slot = if in_x { 0 } else { 1 };
            let f = appell_operand(*params, *d, *cfg);
            let ctx = EvalContext::for_params(d, p);
            let lhs = apply(&OperatorExpr::Power(Box::new(OperatorExpr::Delta(slot)), r), &f, &ctx)?;
            let (coord, b_own, c_own) = if in_x {
                (p.x, params.b1, params.c1)
            } else {
                (p.y, params.b2, params.c2)
            };
            let prefactor = pochhammer(params.a, r) * pochhammer(b_own, r) * coord.powu(r as u32)
                / pochhammer(c_own, r);
            let shifted = if in_x {
                shifted_params(params, rf, rf, 0.0, rf, 0.0)
            } else {
                shifted_params(params, rf, 0.0, rf, 0.0, rf)
            };
            let rhs = prefactor * f_value(&shifted, d, p, cfg)?;
            (lhs, rhs)
        }
        DiffFormula::ThetaPow | DiffFormula::PhiPow => {
            let in_x = which == DiffFormula::ThetaPow;
            // x^r (d/dx)^r acts term-wise as the falling factorial
            // m(m-1)...(m-r+1); the single weighted pass keeps the exact
            // zeros that the composed-operator route would smear.
            let w = move |i: TermIndex| {
                let idx = if in_x { i.m } else { i.n } as f64;
                let mut acc = 1.0;
                for j in 0..r {
                    acc *= idx - j as f64;
                }
                Complex64::new(acc, 0.0)
            };
            let lhs = f_weighted(params, d, p, cfg, &w)?;
            let (t_dir, k_dir) = if in_x { x_direction(d) } else { y_direction(d) };
            let (coord, b_own, c_own) = if in_x {
                (p.x, params.b1, params.c1)
            } else {
                (p.y, params.b2, params.c2)
            };
            let prefactor = discrete_factor(t_dir, k_dir, r)?
                * pochhammer(params.a, r)
                * pochhammer(b_own, r)
                * coord.powu(r as u32)
                / pochhammer(c_own, r);
            let rhs = if prefactor.norm() == 0.0 {
                // A vanished discrete factor truncates the formula; the
                // shifted function need not (and may not) be evaluable.
                Complex64::new(0.0, 0.0)
            } else {
                let shifted = if in_x {
                    shifted_params(params, rf, rf, 0.0, rf, 0.0)
                } else {
                    shifted_params(params, rf, 0.0, rf, 0.0, rf)
                };
                let lowered = match (variant, in_x) {
                    (VariantTag::V1, true) => lower_t1(d, r)?,
                    (VariantTag::V1, false) => lower_t2(d, r)?,
                    (VariantTag::V2, _) => lower_t(d, r)?,
                };
                prefactor * f_value(&shifted, &lowered, p, cfg)?
            };
            (lhs, rhs)
        }
        DiffFormula::DxConjB1 => {
            let b1 = params.b1;
            let w = move |i: TermIndex| pochhammer(b1 + i.m as f64, r);
            let lhs = f_weighted(params, d, p, cfg, &w)?;
            let rhs = pochhammer(b1, r)
                * f_value(&shifted_params(params, 0.0, rf, 0.0, 0.0, 0.0), d, p, cfg)?;
            (lhs, rhs)
        }
        DiffFormula::DyConjB2 => {
            let b2 = params.b2;
            let w = move |i: TermIndex| pochhammer(b2 + i.n as f64, r);
            let lhs = f_weighted(params, d, p, cfg, &w)?;
            let rhs = pochhammer(b2, r)
                * f_value(&shifted_params(params, 0.0, 0.0, rf, 0.0, 0.0), d, p, cfg)?;
            (lhs, rhs)
        }
        DiffFormula::DxConjA | DiffFormula::DyConjA => {
            let a = params.a;
            // The conjugated argument pair: (x, xy) for the x form,
            // (xy, y) for the y form.
            let q = if which == DiffFormula::DxConjA {
                EvalPoint {
                    x: p.x,
                    y: p.x * p.y,
                }
            } else {
                EvalPoint {
                    x: p.x * p.y,
                    y: p.y,
                }
            };
            let w = move |i: TermIndex| pochhammer(a + (i.m + i.n) as f64, r);
            let lhs = f_weighted(params, d, q, cfg, &w)?;
            let rhs = pochhammer(a, r)
                * f_value(&shifted_params(params, rf, 0.0, 0.0, 0.0, 0.0), d, q, cfg)?;
            (lhs, rhs)
        }
        DiffFormula::DxConjC1 => {
            let c1 = params.c1;
            if is_near_nonpositive_integer(c1 - rf) {
                return Err(EvalError::Precondition(format!(
                    "c1 - r = {} is a non-positive integer",
                    c1 - rf
                )));
            }
            let w = move |i: TermIndex| pochhammer(c1 + i.m as f64 - rf, r);
            let lhs = f_weighted(params, d, p, cfg, &w)?;
            let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
            let rhs = sign
                * pochhammer(one() - c1, r)
                * f_value(&shifted_params(params, 0.0, 0.0, 0.0, -rf, 0.0), d, p, cfg)?;
            (lhs, rhs)
        }
        DiffFormula::DyConjC2 => {
            let c2 = params.c2;
            if is_near_nonpositive_integer(c2 - rf) {
                return Err(EvalError::Precondition(format!(
                    "c2 - r = {} is a non-positive integer",
                    c2 - rf
                )));
            }
            let w = move |i: TermIndex| pochhammer(c2 + i.n as f64 - rf, r);
            let lhs = f_weighted(params, d, p, cfg, &w)?;
            let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
            let rhs = sign
                * pochhammer(one() - c2, r)
                * f_value(&shifted_params(params, 0.0, 0.0, 0.0, 0.0, -rf), d, p, cfg)?;
            (lhs, rhs)
        }
    };
    Ok(IdentityCheckResult::from_sides(id, record, lhs, rhs, tolerance))
}

/// The summation formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummationFormula {
    /// F(b1 + r) as a finite binomial sum of first-direction shifts.
    FiniteB1,
    /// F(b2 + r) as a finite binomial sum of second-direction shifts.
    FiniteB2,
    /// The a-indexed infinite sum resumming to a (1-z)^{-a} dilation of
    /// both arguments.
    InfiniteA,
    /// The b1-indexed infinite sum (dilates x only).
    InfiniteB1,
    /// The b2-indexed infinite sum (dilates y only).
    InfiniteB2,
}

impl SummationFormula {
    pub const ALL: [SummationFormula; 5] = [
        SummationFormula::FiniteB1,
        SummationFormula::FiniteB2,
        SummationFormula::InfiniteA,
        SummationFormula::InfiniteB1,
        SummationFormula::InfiniteB2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SummationFormula::FiniteB1 => "finite-b1",
            SummationFormula::FiniteB2 => "finite-b2",
            SummationFormula::InfiniteA => "infinite-a",
            SummationFormula::InfiniteB1 => "infinite-b1",
            SummationFormula::InfiniteB2 => "infinite-b2",
        }
    }

    pub fn family(&self) -> IdentityFamily {
        match self {
            SummationFormula::FiniteB1 | SummationFormula::FiniteB2 => IdentityFamily::FiniteSum,
            _ => IdentityFamily::InfiniteSum,
        }
    }
}

fn binomial(r: usize, s: usize) -> f64 {
    let mut acc = 1.0f64;
    for j in 0..s {
        acc = acc * (r - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Checks one summation formula. For the finite formulas
/// `r_or_truncation` is the shift r >= 0; for the infinite ones it is the
/// outer truncation length (>= 1) and `z` the outer variable.
#[allow(clippy::too_many_arguments)]
pub fn check_summation(
    which: SummationFormula,
    variant: VariantTag,
    r_or_truncation: usize,
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    z: Complex64,
    cfg: &SummationConfig,
    tolerance: f64,
) -> Result<IdentityCheckResult> {
    check_variant_data(variant, d)?;
    let record = PointRecord::from_parts(params, Some(d), Some(p));
    match which {
        SummationFormula::FiniteB1 | SummationFormula::FiniteB2 => {
            let r = r_or_truncation;
            let in_x = which == SummationFormula::FiniteB1;
            let id = IdentityId::new(
                which.family(),
                variant,
                format!("{}-r{}", which.name(), r),
            );
            let record = record.with_r(r);
            let lhs_params = if in_x {
                shifted_params(params, 0.0, r as f64, 0.0, 0.0, 0.0)
            } else {
                shifted_params(params, 0.0, 0.0, r as f64, 0.0, 0.0)
            };
            let lhs = f_value(&lhs_params, d, p, cfg)?;

            let (t_dir, k_dir) = if in_x { x_direction(d) } else { y_direction(d) };
            let (coord, c_own) = if in_x {
                (p.x, params.c1)
            } else {
                (p.y, params.c2)
            };
            let mut rhs = Complex64::new(0.0, 0.0);
            for s in 0..=r {
                let sf = s as f64;
                let coeff = binomial(r, s)
                    * pochhammer(params.a, s)
                    * discrete_factor(t_dir, k_dir, s)?
                    * coord.powu(s as u32)
                    / pochhammer(c_own, s);
                if coeff.norm() == 0.0 {
                    continue;
                }
                let term_params = if in_x {
                    shifted_params(params, sf, sf, 0.0, sf, 0.0)
                } else {
                    shifted_params(params, sf, 0.0, sf, 0.0, sf)
                };
                let term_d = match (variant, in_x) {
                    (VariantTag::V1, true) => lower_t1(d, s)?,
                    (VariantTag::V1, false) => lower_t2(d, s)?,
                    (VariantTag::V2, _) => lower_t(d, s)?,
                };
                rhs += coeff * f_value(&term_params, &term_d, p, cfg)?;
            }
            Ok(IdentityCheckResult::from_sides(id, record, lhs, rhs, tolerance))
        }
        SummationFormula::InfiniteA | SummationFormula::InfiniteB1 | SummationFormula::InfiniteB2 => {
            let truncation = r_or_truncation.max(1);
            if z.norm() >= 1.0 {
                return Err(EvalError::Precondition(format!(
                    "outer variable must satisfy |z| < 1, got {z}"
                )));
            }
            let id = IdentityId::new(which.family(), variant, which.name());
            let record = record.with_z(z).with_r(truncation);
            let base = match which {
                SummationFormula::InfiniteA => params.a,
                SummationFormula::InfiniteB1 => params.b1,
                _ => params.b2,
            };
            let mut lhs = Complex64::new(0.0, 0.0);
            let mut z_pow = one();
            let mut fact = 1.0f64;
            for r in 0..truncation {
                if r > 0 {
                    z_pow *= z;
                    fact *= r as f64;
                }
                let coeff = pochhammer(base, r) * z_pow / fact;
                if coeff.norm() == 0.0 {
                    continue;
                }
                let rf = r as f64;
                let term_params = match which {
                    SummationFormula::InfiniteA => shifted_params(params, rf, 0.0, 0.0, 0.0, 0.0),
                    SummationFormula::InfiniteB1 => shifted_params(params, 0.0, rf, 0.0, 0.0, 0.0),
                    _ => shifted_params(params, 0.0, 0.0, rf, 0.0, 0.0),
                };
                lhs += coeff * f_value(&term_params, d, p, cfg)?;
            }
            let dilate = one() / (one() - z);
            let transformed = match which {
                SummationFormula::InfiniteA => EvalPoint {
                    x: p.x * dilate,
                    y: p.y * dilate,
                },
                SummationFormula::InfiniteB1 => EvalPoint {
                    x: p.x * dilate,
                    y: p.y,
                },
                _ => EvalPoint {
                    x: p.x,
                    y: p.y * dilate,
                },
            };
            let rhs = (one() - z).powc(-base) * f_value(params, d, transformed, cfg)?;
            Ok(IdentityCheckResult::from_sides(id, record, lhs, rhs, tolerance))
        }
    }
}

/// The s-step recursion formulas. The first-analogue statements use a
/// single shared step index, so V1 instances require k1 = k2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecursionFormula {
    APlus,
    AMinus,
    B1Plus,
    B1Minus,
    C1Minus,
}

impl RecursionFormula {
    pub const ALL: [RecursionFormula; 5] = [
        RecursionFormula::APlus,
        RecursionFormula::AMinus,
        RecursionFormula::B1Plus,
        RecursionFormula::B1Minus,
        RecursionFormula::C1Minus,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RecursionFormula::APlus => "a-plus",
            RecursionFormula::AMinus => "a-minus",
            RecursionFormula::B1Plus => "b1-plus",
            RecursionFormula::B1Minus => "b1-minus",
            RecursionFormula::C1Minus => "c1-minus",
        }
    }
}

/// Checks one recursion formula with step count `s`.
#[allow(clippy::too_many_arguments)]
pub fn check_recursion(
    which: RecursionFormula,
    variant: VariantTag,
    s: usize,
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
    tolerance: f64,
) -> Result<IdentityCheckResult> {
    if s == 0 {
        return Err(EvalError::Precondition("step count s must be >= 1".into()));
    }
    check_variant_data(variant, d)?;
    // The single-k reading of the first-analogue statements.
    if let DiscreteParams::V1 { k1, k2, .. } = *d {
        if k1 != k2 {
            return Err(EvalError::Precondition(format!(
                "recursion formulas use one shared step index, got k1 = {k1}, k2 = {k2}"
            )));
        }
    }
    let id = IdentityId::new(
        IdentityFamily::Recursion,
        variant,
        format!("{}-s{}", which.name(), s),
    );
    let record = PointRecord::from_parts(params, Some(d), Some(p)).with_s(s);
    let sf = s as f64;

    let (t1_dir, k) = x_direction(d);
    let (t2_dir, _) = y_direction(d);
    // First-direction and second-direction single-step prefactor cores:
    // (-1)^k (-t)_k.
    let step1 = discrete_factor(t1_dir, k, 1)?;
    let step2 = discrete_factor(t2_dir, k, 1)?;
    let lower1 = |steps: usize| -> Result<DiscreteParams> {
        match variant {
            VariantTag::V1 => lower_t1(d, steps),
            VariantTag::V2 => lower_t(d, steps),
        }
    };
    let lower2 = |steps: usize| -> Result<DiscreteParams> {
        match variant {
            VariantTag::V1 => lower_t2(d, steps),
            VariantTag::V2 => lower_t(d, steps),
        }
    };

    let base_value = f_value(params, d, p, cfg)?;
    let (lhs, rhs) = match which {
        RecursionFormula::APlus => {
            let lhs = f_value(&shifted_params(params, sf, 0.0, 0.0, 0.0, 0.0), d, p, cfg)?;
            let pre1 = step1 * params.b1 * p.x / params.c1;
            let pre2 = step2 * params.b2 * p.y / params.c2;
            let mut acc = base_value;
            for r in 1..=s {
                let rf = r as f64;
                acc += pre1
                    * f_value(
                        &shifted_params(params, rf, 1.0, 0.0, 1.0, 0.0),
                        &lower1(1)?,
                        p,
                        cfg,
                    )?;
                acc += pre2
                    * f_value(
                        &shifted_params(params, rf, 0.0, 1.0, 0.0, 1.0),
                        &lower2(1)?,
                        p,
                        cfg,
                    )?;
            }
            (lhs, acc)
        }
        RecursionFormula::AMinus => {
            let lhs = f_value(&shifted_params(params, -sf, 0.0, 0.0, 0.0, 0.0), d, p, cfg)?;
            let pre1 = step1 * params.b1 * p.x / params.c1;
            let pre2 = step2 * params.b2 * p.y / params.c2;
            let mut acc = base_value;
            for r in 0..s {
                let rf = r as f64;
                acc -= pre1
                    * f_value(
                        &shifted_params(params, -rf, 1.0, 0.0, 1.0, 0.0),
                        &lower1(1)?,
                        p,
                        cfg,
                    )?;
                acc -= pre2
                    * f_value(
                        &shifted_params(params, -rf, 0.0, 1.0, 0.0, 1.0),
                        &lower2(1)?,
                        p,
                        cfg,
                    )?;
            }
            (lhs, acc)
        }
        RecursionFormula::B1Plus => {
            let lhs = f_value(&shifted_params(params, 0.0, sf, 0.0, 0.0, 0.0), d, p, cfg)?;
            let pre = step1 * params.a * p.x / params.c1;
            let mut acc = base_value;
            for r in 1..=s {
                let rf = r as f64;
                acc += pre
                    * f_value(
                        &shifted_params(params, 1.0, rf, 0.0, 1.0, 0.0),
                        &lower1(1)?,
                        p,
                        cfg,
                    )?;
            }
            (lhs, acc)
        }
        RecursionFormula::B1Minus => {
            let lhs = f_value(&shifted_params(params, 0.0, -sf, 0.0, 0.0, 0.0), d, p, cfg)?;
            let pre = step1 * params.a * p.x / params.c1;
            let mut acc = base_value;
            for r in 0..s {
                let rf = r as f64;
                acc -= pre
                    * f_value(
                        &shifted_params(params, 1.0, -rf, 0.0, 1.0, 0.0),
                        &lower1(1)?,
                        p,
                        cfg,
                    )?;
            }
            (lhs, acc)
        }
        RecursionFormula::C1Minus => {
            // Chaining the single-step lowering: each step from c1-r+1 to
            // c1-r contributes its own theta image divided by
            // (c1-r)(c1-r+1).
            for j in 1..=s {
                if is_near_nonpositive_integer(params.c1 - j as f64) {
                    return Err(EvalError::Precondition(format!(
                        "c1 - {j} is a non-positive integer"
                    )));
                }
            }
            let lhs = f_value(&shifted_params(params, 0.0, 0.0, 0.0, -sf, 0.0), d, p, cfg)?;
            let pre = step1 * params.a * params.b1 * p.x;
            let mut acc = base_value;
            for r in 1..=s {
                let rf = r as f64;
                let denom = (params.c1 - rf) * (params.c1 - rf + 1.0);
                acc += pre
                    * f_value(
                        &shifted_params(params, 1.0, 1.0, 0.0, 2.0 - rf, 0.0),
                        &lower1(1)?,
                        p,
                        cfg,
                    )?
                    / denom;
            }
            (lhs, acc)
        }
    };
    Ok(IdentityCheckResult::from_sides(id, record, lhs, rhs, tolerance))
}
