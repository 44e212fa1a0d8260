//! Shift operators Δ, ρ, Θ in the discrete parameters and Euler operators
//! θ = x ∂/∂x, φ = y ∂/∂y in the arguments, composable into expression
//! trees, plus residual evaluation of the difference-differential equations.
//!
//! Θ_t = t ρ_t Δ_t is applied as "first Δ, then ρ, then multiply by t",
//! i.e. Θ_t f(t) = t (f(t) - f(t-1)); this is the composition order under
//! which Θ_t has eigenvalue nk on (-1)^{nk} (-t)_{nk}, and the alternative
//! order fails that relation.

use crate::appell::{
    eval_discrete_f2, eval_discrete_f2_weighted, eval_humbert, eval_humbert_weighted,
    DiscreteParams, EvalPoint, HumbertKind, ParameterSet,
};
use crate::error::{EvalError, Result};
use crate::gamma::pochhammer;
use crate::identities::{IdentityCheckResult, IdentityFamily, IdentityId, PointRecord, VariantTag};
use crate::series::{SummationConfig, TermIndex};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// The point an operator expression is evaluated at: current values of the
/// discrete slots plus the arguments.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub t: Vec<Complex64>,
    pub x: Complex64,
    pub y: Complex64,
}

impl EvalContext {
    pub fn new(t: Vec<Complex64>, x: Complex64, y: Complex64) -> Self {
        EvalContext { t, x, y }
    }

    /// Context for a discrete parameter set and argument pair.
    pub fn for_params(d: &DiscreteParams, p: EvalPoint) -> Self {
        let t = match *d {
            DiscreteParams::V1 { t1, t2, .. } | DiscreteParams::V3 { t1, t2, .. } => vec![t1, t2],
            DiscreteParams::V2 { t, .. } => vec![t],
        };
        EvalContext { t, x: p.x, y: p.y }
    }

    fn shifted(&self, slot: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.t[slot] += delta;
        out
    }

    fn with_x(&self, x: Complex64) -> Self {
        let mut out = self.clone();
        out.x = x;
        out
    }

    fn with_y(&self, y: Complex64) -> Self {
        let mut out = self.clone();
        out.y = y;
        out
    }
}

type DynEval = Arc<dyn Fn(&EvalContext) -> Result<Complex64> + Send + Sync>;
type DynWeighted =
    Arc<dyn for<'a> Fn(&EvalContext, &'a dyn Fn(TermIndex) -> Complex64) -> Result<Complex64> + Send + Sync>;

/// A function the operators act on: a closure over (t-slots, x, y), with
/// metadata naming which slots exist, and an optional series handle that
/// supports exact term-wise weighting (used by the Euler operators).
#[derive(Clone)]
pub struct EvaluableFunction {
    slots: Vec<&'static str>,
    eval: DynEval,
    weighted: Option<DynWeighted>,
}

impl fmt::Debug for EvaluableFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvaluableFunction")
            .field("slots", &self.slots)
            .field("series_handle", &self.weighted.is_some())
            .finish()
    }
}

impl EvaluableFunction {
    /// A plain closure without a series handle; Euler operators fall back to
    /// finite differences on it.
    pub fn from_closure<F>(slots: Vec<&'static str>, eval: F) -> Self
    where
        F: Fn(&EvalContext) -> Result<Complex64> + Send + Sync + 'static,
    {
        EvaluableFunction {
            slots,
            eval: Arc::new(eval),
            weighted: None,
        }
    }

    pub fn slots(&self) -> &[&'static str] {
        &self.slots
    }

    pub fn has_series_handle(&self) -> bool {
        self.weighted.is_some()
    }

    pub fn eval(&self, ctx: &EvalContext) -> Result<Complex64> {
        if ctx.t.len() < self.slots.len() {
            return Err(EvalError::Domain(format!(
                "context provides {} slot values, function needs {}",
                ctx.t.len(),
                self.slots.len()
            )));
        }
        (self.eval)(ctx)
    }

    /// Exact weighted series sum when the handle exists.
    pub fn eval_weighted(
        &self,
        ctx: &EvalContext,
        w: &dyn Fn(TermIndex) -> Complex64,
    ) -> Result<Complex64> {
        match &self.weighted {
            Some(h) => h(ctx, w),
            None => Err(EvalError::Domain(
                "function exposes no series handle".into(),
            )),
        }
    }
}

/// A discrete Appell function as an operator operand. The discrete
/// variables are read from the evaluation context so that shift operators
/// can move them; the step indices stay fixed.
type RebuildFn = Arc<dyn Fn(&EvalContext) -> DiscreteParams + Send + Sync>;

pub fn appell_operand(params: ParameterSet, d: DiscreteParams, cfg: SummationConfig) -> EvaluableFunction {
    let (slots, rebuild): (Vec<&'static str>, RebuildFn) =
        match d {
            DiscreteParams::V1 { k1, k2, .. } => (
                vec!["t1", "t2"],
                Arc::new(move |ctx: &EvalContext| DiscreteParams::V1 {
                    t1: ctx.t[0],
                    t2: ctx.t[1],
                    k1,
                    k2,
                }),
            ),
            DiscreteParams::V3 { k, .. } => (
                vec!["t1", "t2"],
                Arc::new(move |ctx: &EvalContext| DiscreteParams::V3 {
                    t1: ctx.t[0],
                    t2: ctx.t[1],
                    k,
                }),
            ),
            DiscreteParams::V2 { k, .. } => (
                vec!["t"],
                Arc::new(move |ctx: &EvalContext| DiscreteParams::V2 { t: ctx.t[0], k }),
            ),
        };
    let rebuild_eval = Arc::clone(&rebuild);
    let eval: DynEval = Arc::new(move |ctx: &EvalContext| {
        let d = rebuild_eval(ctx);
        Ok(eval_discrete_f2(&params, &d, EvalPoint { x: ctx.x, y: ctx.y }, &cfg)?.value)
    });
    let weighted: DynWeighted = Arc::new(move |ctx: &EvalContext, w: &dyn Fn(TermIndex) -> Complex64| {
        let d = rebuild(ctx);
        Ok(eval_discrete_f2_weighted(&params, &d, EvalPoint { x: ctx.x, y: ctx.y }, &cfg, w)?.value)
    });
    EvaluableFunction {
        slots,
        eval,
        weighted: Some(weighted),
    }
}

/// A discrete Humbert function as an operator operand.
pub fn humbert_operand(
    kind: HumbertKind,
    params: ParameterSet,
    d: DiscreteParams,
    cfg: SummationConfig,
) -> EvaluableFunction {
    let base = appell_operand(params, d, cfg);
    let slots = base.slots.clone();
    let rebuild: RebuildFn = match d {
        DiscreteParams::V1 { k1, k2, .. } => Arc::new(move |ctx: &EvalContext| DiscreteParams::V1 {
            t1: ctx.t[0],
            t2: ctx.t[1],
            k1,
            k2,
        }),
        DiscreteParams::V3 { k, .. } => Arc::new(move |ctx: &EvalContext| DiscreteParams::V3 {
            t1: ctx.t[0],
            t2: ctx.t[1],
            k,
        }),
        DiscreteParams::V2 { k, .. } => Arc::new(move |ctx: &EvalContext| DiscreteParams::V2 {
            t: ctx.t[0],
            k,
        }),
    };
    let rebuild_eval = Arc::clone(&rebuild);
    let eval: DynEval = Arc::new(move |ctx: &EvalContext| {
        let d = rebuild_eval(ctx);
        Ok(eval_humbert(kind, &params, &d, EvalPoint { x: ctx.x, y: ctx.y }, &cfg)?.value)
    });
    let weighted: DynWeighted = Arc::new(move |ctx: &EvalContext, w: &dyn Fn(TermIndex) -> Complex64| {
        let d = rebuild(ctx);
        Ok(
            eval_humbert_weighted(kind, &params, &d, EvalPoint { x: ctx.x, y: ctx.y }, &cfg, w)?
                .value,
        )
    });
    EvaluableFunction {
        slots,
        eval,
        weighted: Some(weighted),
    }
}

/// Which coordinate a multiplication operator touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    X,
    Y,
}

/// A composable expression of shift and Euler operators.
///
/// `Compose(a, b)` applies `b` first. `Power(op, r)` is r-fold composition
/// with `Power(op, 0)` the identity.
#[derive(Clone)]
pub enum OperatorExpr {
    Identity,
    /// Forward difference in a slot: (Δ f)(t) = f(t+1) - f(t).
    Delta(usize),
    /// Backward shift in a slot: (ρ f)(t) = f(t-1).
    Rho(usize),
    /// Discrete Euler operator: (Θ f)(t) = t (f(t) - f(t-1)).
    Theta(usize),
    /// x ∂/∂x, exact through the series handle, finite differences otherwise.
    EulerX,
    /// y ∂/∂y.
    EulerY,
    /// f -> c f.
    ScalarMul(Complex64),
    /// f -> x f or f -> y f.
    CoordinateMul(Coordinate),
    /// f -> g(ctx) f for a context-dependent coefficient (evaluated at the
    /// context current at its position in the composition).
    FnMul(Arc<dyn Fn(&EvalContext) -> Complex64 + Send + Sync>),
    Add(Vec<OperatorExpr>),
    Compose(Box<OperatorExpr>, Box<OperatorExpr>),
    Power(Box<OperatorExpr>, usize),
}

impl fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorExpr::Identity => write!(f, "Identity"),
            OperatorExpr::Delta(s) => write!(f, "Delta({s})"),
            OperatorExpr::Rho(s) => write!(f, "Rho({s})"),
            OperatorExpr::Theta(s) => write!(f, "Theta({s})"),
            OperatorExpr::EulerX => write!(f, "EulerX"),
            OperatorExpr::EulerY => write!(f, "EulerY"),
            OperatorExpr::ScalarMul(c) => write!(f, "ScalarMul({c})"),
            OperatorExpr::CoordinateMul(c) => write!(f, "CoordinateMul({c:?})"),
            OperatorExpr::FnMul(_) => write!(f, "FnMul(..)"),
            OperatorExpr::Add(v) => f.debug_tuple("Add").field(v).finish(),
            OperatorExpr::Compose(a, b) => f.debug_tuple("Compose").field(a).field(b).finish(),
            OperatorExpr::Power(op, r) => f.debug_tuple("Power").field(op).field(r).finish(),
        }
    }
}

impl OperatorExpr {
    /// self ∘ rhs (rhs applied first).
    pub fn after(self, rhs: OperatorExpr) -> OperatorExpr {
        OperatorExpr::Compose(Box::new(self), Box::new(rhs))
    }

    /// A linear form c + Σ coeff_i op_i.
    pub fn linear(constant: Complex64, terms: Vec<(Complex64, OperatorExpr)>) -> OperatorExpr {
        let mut parts = vec![OperatorExpr::ScalarMul(constant)];
        for (coeff, op) in terms {
            parts.push(OperatorExpr::ScalarMul(coeff).after(op));
        }
        OperatorExpr::Add(parts)
    }
}

fn weight_m(i: TermIndex) -> Complex64 {
    Complex64::new(i.m as f64, 0.0)
}

fn weight_n(i: TermIndex) -> Complex64 {
    Complex64::new(i.n as f64, 0.0)
}

/// Transform `f` by `expr`, producing a new evaluable function.
pub fn transform(expr: &OperatorExpr, f: &EvaluableFunction) -> EvaluableFunction {
    match expr {
        OperatorExpr::Identity => f.clone(),
        // Δ f = f(t+1) - f(t)
        OperatorExpr::Delta(slot) => shift_combination(f, *slot, 1.0, 1.0, -1.0, false),
        // ρ f = f(t-1)
        OperatorExpr::Rho(slot) => shift_combination(f, *slot, -1.0, 1.0, 0.0, false),
        // Θ f = t (f(t) - f(t-1))
        OperatorExpr::Theta(slot) => shift_combination(f, *slot, -1.0, -1.0, 1.0, true),
        OperatorExpr::EulerX => euler(f, Coordinate::X),
        OperatorExpr::EulerY => euler(f, Coordinate::Y),
        OperatorExpr::ScalarMul(c) => {
            let c = *c;
            let g = f.clone();
            let g2 = f.clone();
            EvaluableFunction {
                slots: f.slots.clone(),
                eval: Arc::new(move |ctx| Ok(c * g.eval(ctx)?)),
                weighted: f.weighted.as_ref().map(|_| -> DynWeighted {
                    Arc::new(move |ctx, w| Ok(c * g2.eval_weighted(ctx, w)?))
                }),
            }
        }
        OperatorExpr::CoordinateMul(coord) => {
            let coord = *coord;
            let g = f.clone();
            let g2 = f.clone();
            EvaluableFunction {
                slots: f.slots.clone(),
                eval: Arc::new(move |ctx| {
                    let z = match coord {
                        Coordinate::X => ctx.x,
                        Coordinate::Y => ctx.y,
                    };
                    Ok(z * g.eval(ctx)?)
                }),
                weighted: f.weighted.as_ref().map(|_| -> DynWeighted {
                    Arc::new(move |ctx, w| {
                        let z = match coord {
                            Coordinate::X => ctx.x,
                            Coordinate::Y => ctx.y,
                        };
                        // Multiplying by a coordinate shifts the coefficient
                        // array, so the weight index shifts the other way.
                        let shifted = |i: TermIndex| match coord {
                            Coordinate::X => w(TermIndex { m: i.m + 1, n: i.n }),
                            Coordinate::Y => w(TermIndex { m: i.m, n: i.n + 1 }),
                        };
                        Ok(z * g2.eval_weighted(ctx, &shifted)?)
                    })
                }),
            }
        }
        OperatorExpr::FnMul(gfn) => {
            let gfn_e = Arc::clone(gfn);
            let gfn_w = Arc::clone(gfn);
            let g = f.clone();
            let g2 = f.clone();
            EvaluableFunction {
                slots: f.slots.clone(),
                eval: Arc::new(move |ctx| Ok(gfn_e(ctx) * g.eval(ctx)?)),
                weighted: f.weighted.as_ref().map(|_| -> DynWeighted {
                    Arc::new(move |ctx, w| Ok(gfn_w(ctx) * g2.eval_weighted(ctx, w)?))
                }),
            }
        }
        OperatorExpr::Add(parts) => {
            let transformed: Vec<EvaluableFunction> = parts.iter().map(|p| transform(p, f)).collect();
            let all_weighted = transformed.iter().all(|g| g.weighted.is_some());
            let ts = transformed.clone();
            let ts2 = transformed;
            EvaluableFunction {
                slots: f.slots.clone(),
                eval: Arc::new(move |ctx| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for g in &ts {
                        acc += g.eval(ctx)?;
                    }
                    Ok(acc)
                }),
                weighted: all_weighted.then(|| -> DynWeighted {
                    Arc::new(move |ctx, w| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for g in &ts2 {
                            acc += g.eval_weighted(ctx, w)?;
                        }
                        Ok(acc)
                    })
                }),
            }
        }
        OperatorExpr::Compose(a, b) => transform(a, &transform(b, f)),
        OperatorExpr::Power(op, r) => {
            let mut g = f.clone();
            for _ in 0..*r {
                g = transform(op, &g);
            }
            g
        }
    }
}

/// Apply an operator expression to a function at a point.
pub fn apply(expr: &OperatorExpr, f: &EvaluableFunction, ctx: &EvalContext) -> Result<Complex64> {
    transform(expr, f).eval(ctx)
}

/// Shared skeleton for Δ, ρ, Θ:
/// `coeff_shifted * f(t + shift) + coeff_center * f(t)`, optionally
/// premultiplied by t. Θ short-circuits to 0 at t = 0 so that boundary
/// instances never evaluate the out-of-domain shifted point.
fn shift_combination(
    f: &EvaluableFunction,
    slot: usize,
    shift: f64,
    coeff_shifted: f64,
    coeff_center: f64,
    premultiply_t: bool,
) -> EvaluableFunction {
    let g = f.clone();
    let g2 = f.clone();
    let nslots = f.slots.len();
    let check = move |ctx: &EvalContext| -> Result<()> {
        if slot >= nslots || slot >= ctx.t.len() {
            return Err(EvalError::Domain(format!(
                "operator touches slot {slot}, function has {nslots}"
            )));
        }
        Ok(())
    };
    let check2 = check;
    EvaluableFunction {
        slots: f.slots.clone(),
        eval: Arc::new(move |ctx| {
            check(ctx)?;
            let t = ctx.t[slot];
            if premultiply_t && t.norm() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let mut acc = Complex64::new(0.0, 0.0);
            if coeff_shifted != 0.0 {
                acc += coeff_shifted * g.eval(&ctx.shifted(slot, shift))?;
            }
            if coeff_center != 0.0 {
                acc += coeff_center * g.eval(ctx)?;
            }
            if premultiply_t {
                acc *= t;
            }
            Ok(acc)
        }),
        weighted: f.weighted.as_ref().map(|_| -> DynWeighted {
            Arc::new(move |ctx, w| {
                check2(ctx)?;
                let t = ctx.t[slot];
                if premultiply_t && t.norm() == 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let mut acc = Complex64::new(0.0, 0.0);
                if coeff_shifted != 0.0 {
                    acc += coeff_shifted * g2.eval_weighted(&ctx.shifted(slot, shift), w)?;
                }
                if coeff_center != 0.0 {
                    acc += coeff_center * g2.eval_weighted(ctx, w)?;
                }
                if premultiply_t {
                    acc *= t;
                }
                Ok(acc)
            })
        }),
    }
}

/// Euler operator: exact term-wise weights through the series handle, else
/// central finite differences in log-coordinates (relative step 1e-5, one
/// Richardson level).
fn euler(f: &EvaluableFunction, coord: Coordinate) -> EvaluableFunction {
    let has_handle = f.weighted.is_some();
    let g = f.clone();
    let g2 = f.clone();
    EvaluableFunction {
        slots: f.slots.clone(),
        eval: Arc::new(move |ctx| {
            if has_handle {
                let w = match coord {
                    Coordinate::X => weight_m,
                    Coordinate::Y => weight_n,
                };
                return g.eval_weighted(ctx, &w);
            }
            let z = match coord {
                Coordinate::X => ctx.x,
                Coordinate::Y => ctx.y,
            };
            if z.norm() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let probe = |delta: f64| -> Result<Complex64> {
                let up = z * (1.0 + delta);
                let down = z * (1.0 - delta);
                let (fu, fd) = match coord {
                    Coordinate::X => (g.eval(&ctx.with_x(up))?, g.eval(&ctx.with_x(down))?),
                    Coordinate::Y => (g.eval(&ctx.with_y(up))?, g.eval(&ctx.with_y(down))?),
                };
                Ok((fu - fd) / (2.0 * delta))
            };
            let h = 1e-5;
            let d1 = probe(h)?;
            let d2 = probe(h / 2.0)?;
            Ok((4.0 * d2 - d1) / 3.0)
        }),
        weighted: f.weighted.as_ref().map(|_| -> DynWeighted {
            Arc::new(move |ctx, w| {
                let composed = |i: TermIndex| {
                    w(i) * match coord {
                        Coordinate::X => Complex64::new(i.m as f64, 0.0),
                        Coordinate::Y => Complex64::new(i.n as f64, 0.0),
                    }
                };
                g2.eval_weighted(ctx, &composed)
            })
        }),
    }
}

/// Which difference(-differential) equation to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DifferenceEquation {
    /// First-analogue equation in the x/t1 direction.
    V1X,
    /// First-analogue equation in the y/t2 direction.
    V1Y,
    /// Second-analogue equation in the x direction (θ with Θ_t).
    V2X,
    /// Second-analogue equation in the y direction (φ with Θ_t).
    V2Y,
}

impl DifferenceEquation {
    pub fn detail(&self) -> &'static str {
        match self {
            DifferenceEquation::V1X => "x",
            DifferenceEquation::V1Y => "y",
            DifferenceEquation::V2X => "x",
            DifferenceEquation::V2Y => "y",
        }
    }
}

/// Evaluates the full operator polynomial of a difference-differential
/// equation at a point and reports the residual. Passing means
/// |residual| <= 1e-8 (1 + s) where s is the largest top-level term.
pub fn residual_difference_equation(
    which: DifferenceEquation,
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
) -> Result<IdentityCheckResult> {
    use OperatorExpr as Op;
    let one = Complex64::new(1.0, 0.0);

    let (variant, term1_expr, term2_expr) = match which {
        DifferenceEquation::V1X | DifferenceEquation::V1Y => {
            let (t1, t2, k1, k2) = match *d {
                DiscreteParams::V1 { t1, t2, k1, k2 } => (t1, t2, k1, k2),
                DiscreteParams::V3 { t1, t2, k } => (t1, t2, k, k),
                DiscreteParams::V2 { .. } => {
                    return Err(EvalError::Precondition(
                        "first-analogue equations need V1/V3 discrete data".into(),
                    ))
                }
            };
            let _ = (t1, t2);
            if k1 == 0 || k2 == 0 {
                return Err(EvalError::Precondition(
                    "difference equations divide by the step indices; k = 0 is unspecified".into(),
                ));
            }
            // Slot roles under the x <-> y mirror.
            let (slot, other_slot, k_slot, k_other, b_own, c_own, coord) = match which {
                DifferenceEquation::V1X => (0usize, 1usize, k1, k2, params.b1, params.c1, Coordinate::X),
                _ => (1usize, 0usize, k2, k1, params.b2, params.c2, Coordinate::Y),
            };
            let inv_k = Complex64::new(1.0 / k_slot as f64, 0.0);
            let inv_k_other = Complex64::new(1.0 / k_other as f64, 0.0);
            let theta_own = || Op::Theta(slot);
            let theta_other = || Op::Theta(other_slot);

            let term1 = Op::Theta(slot).after(Op::linear(
                c_own - one,
                vec![(inv_k, theta_own())],
            ));
            let joint = Op::linear(
                params.a,
                vec![(inv_k, theta_own()), (inv_k_other, theta_other())],
            );
            let own = Op::linear(b_own, vec![(inv_k, theta_own())]);
            let k_f = k_slot as f64;
            let sign = if k_slot.is_multiple_of(2) { 1.0 } else { -1.0 };
            let prefactor: Arc<dyn Fn(&EvalContext) -> Complex64 + Send + Sync> =
                Arc::new(move |ctx: &EvalContext| {
                    let t = ctx.t[slot];
                    let z = match coord {
                        Coordinate::X => ctx.x,
                        Coordinate::Y => ctx.y,
                    };
                    k_f * sign * pochhammer(-t, k_slot) * z
                });
            let term2 = Op::FnMul(prefactor)
                .after(Op::Power(Box::new(Op::Rho(slot)), k_slot))
                .after(joint)
                .after(own);
            (VariantTag::V1, term1, term2)
        }
        DifferenceEquation::V2X | DifferenceEquation::V2Y => {
            let k = match *d {
                DiscreteParams::V2 { k, .. } => k,
                _ => {
                    return Err(EvalError::Precondition(
                        "second-analogue equations need V2 discrete data".into(),
                    ))
                }
            };
            if k == 0 {
                return Err(EvalError::Precondition(
                    "difference equations divide by the step index; k = 0 is unspecified".into(),
                ));
            }
            let (euler_own, b_own, c_own, coord) = match which {
                DifferenceEquation::V2X => (Op::EulerX, params.b1, params.c1, Coordinate::X),
                _ => (Op::EulerY, params.b2, params.c2, Coordinate::Y),
            };
            let inv_k = Complex64::new(1.0 / k as f64, 0.0);
            let term1 = euler_own
                .clone()
                .after(Op::linear(c_own - one, vec![(one, euler_own.clone())]));
            let joint = Op::linear(params.a, vec![(inv_k, Op::Theta(0))]);
            let own = Op::linear(b_own, vec![(one, euler_own)]);
            // No step-index factor here: reindexing θ(θ + c - 1) F produces
            // exactly one (-1)^k (-t)_k per unit shift of m, with nothing to
            // cancel it (the first-analogue equations get their k from the
            // Θ eigenvalue on the left side, which the plain θ lacks).
            let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            let prefactor: Arc<dyn Fn(&EvalContext) -> Complex64 + Send + Sync> =
                Arc::new(move |ctx: &EvalContext| {
                    let t = ctx.t[0];
                    let z = match coord {
                        Coordinate::X => ctx.x,
                        Coordinate::Y => ctx.y,
                    };
                    sign * pochhammer(-t, k) * z
                });
            let term2 = Op::FnMul(prefactor)
                .after(Op::Power(Box::new(Op::Rho(0)), k))
                .after(joint)
                .after(own);
            (VariantTag::V2, term1, term2)
        }
    };

    let f = appell_operand(*params, *d, *cfg);
    let ctx = EvalContext::for_params(d, p);
    let lhs = apply(&term1_expr, &f, &ctx)?;
    let rhs = apply(&term2_expr, &f, &ctx)?;
    let scale = lhs.norm().max(rhs.norm());
    let abs_residual = (lhs - rhs).norm();
    let rel_residual = abs_residual / (1.0 + scale);
    Ok(IdentityCheckResult {
        id: IdentityId::new(IdentityFamily::DifferenceEq, variant, which.detail()),
        point: PointRecord::from_parts(params, Some(d), Some(p)),
        lhs,
        rhs,
        abs_residual,
        rel_residual,
        passed: rel_residual <= 1e-8,
        notes: String::new(),
    })
}
