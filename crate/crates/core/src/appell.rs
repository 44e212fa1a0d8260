//! The function family: classical F2, its three discrete analogues, the four
//! discrete Humbert functions, and the limit checks connecting them.
//!
//! Every series here carries the classical F2 core
//! `(a)_{m+n} (b_1)_m (b_2)_n / ((c_1)_m (c_2)_n m! n!)` times a discrete
//! factor: `(-1)^{mk_1}(-t_1)_{mk_1} (-1)^{nk_2}(-t_2)_{nk_2}` for the first
//! analogue, `(-1)^{(m+n)k}(-t)_{(m+n)k}` for the second, and the mixed
//! `(-1)^{(m+n)k}(-t_1)_{mk}(-t_2)_{nk}` for the third. The third analogue is
//! evaluated by delegation to the first with k_1 = k_2 = k, which is exactly
//! how it is defined.

use crate::error::{EvalError, Result};
use crate::gamma::nearest_nonnegative_integer;
use crate::identities::{IdentityCheckResult, IdentityFamily, IdentityId, PointRecord, VariantTag};
use crate::series::{
    sum_double_series_weighted, SeriesValue, Status, SummationConfig, TerminationBounds, WeightFn,
};
use num_complex::Complex64;

/// The complex parameters a, b1, b2, c1, c2 of an Appell-type function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSet {
    pub a: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
}

impl ParameterSet {
    pub fn real(a: f64, b1: f64, b2: f64, c1: f64, c2: f64) -> Self {
        ParameterSet {
            a: Complex64::new(a, 0.0),
            b1: Complex64::new(b1, 0.0),
            b2: Complex64::new(b2, 0.0),
            c1: Complex64::new(c1, 0.0),
            c2: Complex64::new(c2, 0.0),
        }
    }
}

/// Discrete-variable data distinguishing the three discrete variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscreteParams {
    /// Separate discrete variables per summation index.
    V1 {
        t1: Complex64,
        t2: Complex64,
        k1: usize,
        k2: usize,
    },
    /// One discrete variable graded by the total degree m + n.
    V2 { t: Complex64, k: usize },
    /// Two discrete variables with a shared step index.
    V3 {
        t1: Complex64,
        t2: Complex64,
        k: usize,
    },
}

/// An argument pair. Non-terminating evaluation requires |x| + |y| < 1; any
/// finite point is allowed once the series terminates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub x: Complex64,
    pub y: Complex64,
}

impl EvalPoint {
    pub fn real(x: f64, y: f64) -> Self {
        EvalPoint {
            x: Complex64::new(x, 0.0),
            y: Complex64::new(y, 0.0),
        }
    }

    pub fn origin() -> Self {
        EvalPoint::real(0.0, 0.0)
    }
}

/// Which Humbert function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HumbertKind {
    /// psi_1: keeps the (b_1)_m factor.
    Psi1,
    /// psi_2: no b factors at all.
    Psi2,
}

/// Which numerator factors the series carries (full F2 vs Humbert subsets).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FactorProfile {
    Full,
    NoB2,
    NoB1B2,
}

fn product_shifted(base: Complex64, offset: usize, len: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..len {
        acc *= base + (offset + i) as f64;
    }
    acc
}

/// Termination index from a discrete variable: floor(t/k) when t is a
/// non-negative integer (within pole tolerance) and k >= 1.
fn discrete_bound(t: Complex64, k: usize) -> Option<usize> {
    if k == 0 {
        return None;
    }
    nearest_nonnegative_integer(t).map(|ti| ti as usize / k)
}

/// Unified series evaluation for the whole family.
fn eval_series(
    profile: FactorProfile,
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
    weight: Option<WeightFn<'_>>,
) -> Result<SeriesValue> {
    let ParameterSet { a, b1, b2, c1, c2 } = *params;
    let use_b1 = profile != FactorProfile::NoB1B2;
    let use_b2 = profile == FactorProfile::Full;

    // Termination from the classical numerators.
    let mut bounds = TerminationBounds {
        m_bound: if use_b1 {
            nearest_nonnegative_integer(-b1).map(|q| q as usize)
        } else {
            None
        },
        n_bound: if use_b2 {
            nearest_nonnegative_integer(-b2).map(|q| q as usize)
        } else {
            None
        },
        diagonal_bound: nearest_nonnegative_integer(-a).map(|q| q as usize),
    };
    // Termination from the discrete factors.
    match *d {
        DiscreteParams::V1 { t1, t2, k1, k2 } => {
            bounds = bounds.merge(TerminationBounds {
                m_bound: discrete_bound(t1, k1),
                n_bound: discrete_bound(t2, k2),
                diagonal_bound: None,
            });
        }
        DiscreteParams::V2 { t, k } => {
            bounds = bounds.merge(TerminationBounds {
                m_bound: None,
                n_bound: None,
                diagonal_bound: discrete_bound(t, k),
            });
        }
        DiscreteParams::V3 { t1, t2, k } => {
            bounds = bounds.merge(TerminationBounds {
                m_bound: discrete_bound(t1, k),
                n_bound: discrete_bound(t2, k),
                diagonal_bound: None,
            });
        }
    }

    // Lower-parameter poles are fatal only when the series reaches them.
    let m_reach = [bounds.m_bound, bounds.diagonal_bound]
        .into_iter()
        .flatten()
        .min();
    let n_reach = [bounds.n_bound, bounds.diagonal_bound]
        .into_iter()
        .flatten()
        .min();
    for (c, reach) in [(c1, m_reach), (c2, n_reach)] {
        if let Some(q) = nearest_nonnegative_integer(-c) {
            let hit = match reach {
                Some(bound) => (q as usize) < bound,
                None => true,
            };
            if hit {
                return Err(EvalError::Pole(c));
            }
        }
    }

    // Outside |x| + |y| < 1 the non-terminating sum has no meaning.
    if bounds.horizon().is_none() && p.x.norm() + p.y.norm() >= 1.0 {
        return Err(EvalError::Divergence {
            partial: SeriesValue {
                value: Complex64::new(0.0, 0.0),
                terms_used: 0,
                tail_estimate: f64::INFINITY,
                status: Status::DivergenceDetected,
            },
        });
    }

    let disc = *d;
    let ratio_m = move |m: u32, n: u32| {
        let mf = m as f64;
        let core = (a + (m + n) as f64)
            * if use_b1 {
                b1 + mf
            } else {
                Complex64::new(1.0, 0.0)
            }
            / ((c1 + mf) * (mf + 1.0));
        core * match disc {
            DiscreteParams::V1 { t1, k1, .. } => signed_step(t1, k1, (m as usize) * k1),
            DiscreteParams::V2 { t, k } => signed_step(t, k, ((m + n) as usize) * k),
            DiscreteParams::V3 { t1, k, .. } => signed_step(t1, k, (m as usize) * k),
        }
    };
    let ratio_n = move |m: u32, n: u32| {
        let nf = n as f64;
        let core = (a + (m + n) as f64)
            * if use_b2 {
                b2 + nf
            } else {
                Complex64::new(1.0, 0.0)
            }
            / ((c2 + nf) * (nf + 1.0));
        core * match disc {
            DiscreteParams::V1 { t2, k2, .. } => signed_step(t2, k2, (n as usize) * k2),
            DiscreteParams::V2 { t, k } => signed_step(t, k, ((m + n) as usize) * k),
            DiscreteParams::V3 { t2, k, .. } => signed_step(t2, k, (n as usize) * k),
        }
    };

    let out = sum_double_series_weighted(&ratio_m, &ratio_n, p.x, p.y, bounds, cfg, weight)?;
    if out.status == Status::DivergenceDetected {
        return Err(EvalError::Divergence { partial: out });
    }
    Ok(out)
}

/// One step of the signed discrete factor:
/// `(-1)^k (-t + offset)(-t + offset + 1) ... (-t + offset + k - 1)`.
fn signed_step(t: Complex64, k: usize, offset: usize) -> Complex64 {
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * product_shifted(-t, offset, k)
}

/// Classical Appell F2.
pub fn eval_f2(params: &ParameterSet, p: EvalPoint, cfg: &SummationConfig) -> Result<SeriesValue> {
    eval_series(
        FactorProfile::Full,
        params,
        &DiscreteParams::V1 {
            t1: Complex64::new(0.0, 0.0),
            t2: Complex64::new(0.0, 0.0),
            k1: 0,
            k2: 0,
        },
        p,
        cfg,
        None,
    )
}

/// A discrete Appell function, by variant.
pub fn eval_discrete_f2(
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
) -> Result<SeriesValue> {
    eval_series(FactorProfile::Full, params, d, p, cfg, None)
}

/// Term-weighted variant of [`eval_discrete_f2`] (operator-algebra support).
pub fn eval_discrete_f2_weighted(
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
    weight: WeightFn<'_>,
) -> Result<SeriesValue> {
    eval_series(FactorProfile::Full, params, d, p, cfg, Some(weight))
}

/// A discrete Humbert function by its defining double series.
///
/// `Psi1` uses a, b1, c1, c2 (the b2 field is ignored); `Psi2` uses a, c1,
/// c2 only. The variant comes from `d`: V1/V3 data gives the first discrete
/// version, V2 the second.
pub fn eval_humbert(
    kind: HumbertKind,
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
) -> Result<SeriesValue> {
    let profile = match kind {
        HumbertKind::Psi1 => FactorProfile::NoB2,
        HumbertKind::Psi2 => FactorProfile::NoB1B2,
    };
    eval_series(profile, params, d, p, cfg, None)
}

/// Weighted Humbert evaluation (operator-algebra support).
pub fn eval_humbert_weighted(
    kind: HumbertKind,
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    cfg: &SummationConfig,
    weight: WeightFn<'_>,
) -> Result<SeriesValue> {
    let profile = match kind {
        HumbertKind::Psi1 => FactorProfile::NoB2,
        HumbertKind::Psi2 => FactorProfile::NoB1B2,
    };
    eval_series(profile, params, d, p, cfg, Some(weight))
}

/// Polynomial extrapolation of `(eps_i, values_i)` to eps = 0 (Neville).
fn extrapolate_to_zero(eps: &[f64], values: &[Complex64]) -> Complex64 {
    let n = eps.len();
    let mut tab = values.to_vec();
    for j in 1..n {
        for i in 0..n - j {
            let xi = eps[i];
            let xj = eps[i + j];
            tab[i] = (xj * tab[i] - xi * tab[i + 1]) / (xj - xi);
        }
    }
    tab[0]
}

/// Verifies the limit relation taking a discrete Appell function to a
/// discrete Humbert function.
///
/// For `Psi1` the function is evaluated at (b2 = 1/eps, y -> eps y), for
/// `Psi2` at (b1 = b2 = 1/eps, x -> eps x, y -> eps y), for each eps in the
/// strictly decreasing sequence. The Richardson-style extrapolated limit is
/// compared against [`eval_humbert`]; the check passes when the residual is
/// at most `10 * eps_min * max(1, |humbert|)`.
pub fn check_humbert_limit(
    kind: HumbertKind,
    params: &ParameterSet,
    d: &DiscreteParams,
    p: EvalPoint,
    eps_sequence: &[f64],
    cfg: &SummationConfig,
) -> Result<IdentityCheckResult> {
    if eps_sequence.len() < 2 {
        return Err(EvalError::Precondition(
            "humbert limit needs at least two epsilon values".into(),
        ));
    }
    for w in eps_sequence.windows(2) {
        if !(w[1] > 0.0 && w[1] < w[0]) {
            return Err(EvalError::Precondition(
                "epsilon sequence must be strictly decreasing toward 0".into(),
            ));
        }
    }

    let mut values = Vec::with_capacity(eps_sequence.len());
    for &eps in eps_sequence {
        let inv = Complex64::new(1.0 / eps, 0.0);
        let (scaled_params, scaled_point) = match kind {
            HumbertKind::Psi1 => (
                ParameterSet {
                    b2: inv,
                    ..*params
                },
                EvalPoint {
                    x: p.x,
                    y: p.y * eps,
                },
            ),
            HumbertKind::Psi2 => (
                ParameterSet {
                    b1: inv,
                    b2: inv,
                    ..*params
                },
                EvalPoint {
                    x: p.x * eps,
                    y: p.y * eps,
                },
            ),
        };
        values.push(eval_discrete_f2(&scaled_params, d, scaled_point, cfg)?.value);
    }
    let extrapolated = extrapolate_to_zero(eps_sequence, &values);
    let humbert = eval_humbert(kind, params, d, p, cfg)?.value;

    let eps_min = *eps_sequence.last().unwrap();
    let scale = humbert.norm().max(1.0);
    let abs_residual = (extrapolated - humbert).norm();
    let rel_residual = abs_residual / scale;
    let tolerance = 10.0 * eps_min;
    let variant = match d {
        DiscreteParams::V2 { .. } => VariantTag::V2,
        _ => VariantTag::V1,
    };
    let kind_tag = match kind {
        HumbertKind::Psi1 => "psi1",
        HumbertKind::Psi2 => "psi2",
    };
    Ok(IdentityCheckResult {
        id: IdentityId::new(IdentityFamily::HumbertLimit, variant, kind_tag),
        point: PointRecord::from_parts(params, Some(d), Some(p)),
        lhs: extrapolated,
        rhs: humbert,
        abs_residual,
        rel_residual,
        passed: rel_residual <= tolerance,
        notes: format!("tolerance 10*eps_min = {tolerance:.1e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        let scale = a.norm().max(b.norm());
        if scale == 0.0 {
            0.0
        } else {
            (a - b).norm() / scale
        }
    }

    fn cfg() -> SummationConfig {
        SummationConfig::default()
    }

    #[test]
    fn f2_at_origin_is_one() {
        let params = ParameterSet::real(1.3, 0.7, 1.1, 2.2, 1.9);
        let out = eval_f2(&params, EvalPoint::origin(), &cfg()).unwrap();
        assert_eq!(out.value, c(1.0, 0.0));
    }

    #[test]
    fn f2_binomial_reduction() {
        // b1 = c1, b2 = c2: F2 = (1 - x - y)^(-a); oracle is the closed form.
        let a = 1.5;
        let (x, y) = (0.2, 0.3);
        let params = ParameterSet::real(a, 2.2, 1.9, 2.2, 1.9);
        let out = eval_f2(&params, EvalPoint::real(x, y), &cfg()).unwrap();
        let expected = (1.0 - x - y).powf(-a);
        assert!((expected - 2.0f64.powf(1.5)).abs() < 1e-15);
        assert!(rel(out.value, c(expected, 0.0)) < 1e-12, "{}", out.value);
    }

    #[test]
    fn f2_terminating_negative_a_matches_hand_polynomial() {
        let (b1, b2, c1, c2) = (0.8, 1.4, 2.1, 2.3);
        let (x, y) = (0.7, 1.9); // termination allows any finite point
        let params = ParameterSet::real(-2.0, b1, b2, c1, c2);
        let out = eval_f2(&params, EvalPoint::real(x, y), &cfg()).unwrap();
        // Six-term expansion of F2(-2, b1, b2; c1, c2; x, y).
        let hand = 1.0 - 2.0 * b1 * x / c1 - 2.0 * b2 * y / c2
            + b1 * (b1 + 1.0) * x * x / (c1 * (c1 + 1.0))
            + 2.0 * b1 * b2 * x * y / (c1 * c2)
            + b2 * (b2 + 1.0) * y * y / (c2 * (c2 + 1.0));
        assert_eq!(out.status, Status::Terminated);
        assert!(rel(out.value, c(hand, 0.0)) < 1e-14, "{} vs {hand}", out.value);
    }

    #[test]
    fn discrete_variants_at_origin_are_one() {
        let params = ParameterSet::real(1.3, 0.7, 1.1, 2.2, 1.9);
        let ds = [
            DiscreteParams::V1 {
                t1: c(2.0, 0.0),
                t2: c(3.0, 0.0),
                k1: 1,
                k2: 2,
            },
            DiscreteParams::V2 { t: c(4.0, 0.0), k: 1 },
            DiscreteParams::V3 {
                t1: c(2.0, 0.0),
                t2: c(2.0, 0.0),
                k: 2,
            },
        ];
        for d in &ds {
            let out = eval_discrete_f2(&params, d, EvalPoint::origin(), &cfg()).unwrap();
            assert_eq!(out.value, c(1.0, 0.0), "{d:?}");
        }
    }

    #[test]
    fn v1_with_zero_steps_reduces_to_f2() {
        let params = ParameterSet::real(1.3, 0.7, 1.1, 2.2, 1.9);
        let p = EvalPoint::real(0.25, 0.2);
        let d = DiscreteParams::V1 {
            t1: c(5.5, 1.0),
            t2: c(-3.3, 0.0),
            k1: 0,
            k2: 0,
        };
        let classic = eval_f2(&params, p, &cfg()).unwrap();
        let discrete = eval_discrete_f2(&params, &d, p, &cfg()).unwrap();
        assert!(rel(classic.value, discrete.value) < 1e-14);
    }

    #[test]
    fn termination_bound_on_terms_used() {
        // t1, t2 non-negative integers with k >= 1: terms bounded by
        // (floor(t1/k1)+1)(floor(t2/k2)+1).
        let params = ParameterSet::real(1.3, 0.7, 1.1, 2.2, 1.9);
        let p = EvalPoint::real(0.4, 0.3);
        for (t1, k1, t2, k2) in [(2.0, 1, 3.0, 1), (4.0, 2, 2.0, 2), (3.0, 2, 4.0, 1)] {
            let d = DiscreteParams::V1 {
                t1: c(t1, 0.0),
                t2: c(t2, 0.0),
                k1,
                k2,
            };
            let out = eval_discrete_f2(&params, &d, p, &cfg()).unwrap();
            assert_eq!(out.status, Status::Terminated);
            let bound = (t1 as usize / k1 + 1) * (t2 as usize / k2 + 1);
            assert!(out.terms_used <= bound, "{} > {bound}", out.terms_used);
        }
    }

    #[test]
    fn v1_symmetry_under_index_swap() {
        let params = ParameterSet::real(1.3, 0.7, 1.1, 2.2, 1.9);
        let swapped = ParameterSet {
            a: params.a,
            b1: params.b2,
            b2: params.b1,
            c1: params.c2,
            c2: params.c1,
        };
        let d = DiscreteParams::V1 {
            t1: c(3.0, 0.0),
            t2: c(2.0, 0.0),
            k1: 1,
            k2: 2,
        };
        let d_swapped = DiscreteParams::V1 {
            t1: c(2.0, 0.0),
            t2: c(3.0, 0.0),
            k1: 2,
            k2: 1,
        };
        let p = EvalPoint::real(0.3, 0.2);
        let p_swapped = EvalPoint::real(0.2, 0.3);
        let lhs = eval_discrete_f2(&params, &d, p, &cfg()).unwrap();
        let rhs = eval_discrete_f2(&swapped, &d_swapped, p_swapped, &cfg()).unwrap();
        assert!(rel(lhs.value, rhs.value) < 1e-14, "{} vs {}", lhs.value, rhs.value);
    }

    #[test]
    fn psi2_is_psi1_without_the_b1_factor() {
        // psi2's series is psi1's with the (b1)_m factor removed, which the
        // weighted evaluation expresses as dividing term (m, n) by (b1)_m.
        let params = ParameterSet::real(1.2, 0.85, 9.9, 2.2, 1.7);
        let d = DiscreteParams::V1 {
            t1: c(3.0, 0.0),
            t2: c(2.0, 0.0),
            k1: 1,
            k2: 1,
        };
        let p = EvalPoint::real(0.3, 0.25);
        let b1 = params.b1;
        let stripped = eval_humbert_weighted(
            HumbertKind::Psi1,
            &params,
            &d,
            p,
            &cfg(),
            &|i| 1.0 / crate::gamma::pochhammer(b1, i.m as usize),
        )
        .unwrap();
        let psi2 = eval_humbert(HumbertKind::Psi2, &params, &d, p, &cfg()).unwrap();
        assert!(rel(stripped.value, psi2.value) < 1e-13);
    }

    #[test]
    fn humbert_at_origin_is_one() {
        let params = ParameterSet::real(1.2, 0.9, 1.4, 2.2, 1.7);
        let d = DiscreteParams::V2 { t: c(3.0, 0.0), k: 1 };
        for kind in [HumbertKind::Psi1, HumbertKind::Psi2] {
            let out = eval_humbert(kind, &params, &d, EvalPoint::origin(), &cfg()).unwrap();
            assert_eq!(out.value, c(1.0, 0.0));
        }
    }

    #[test]
    fn psi1_k_zero_matches_classical_series_oracle() {
        // Classical Humbert psi1 by direct rectangle summation.
        let (a, b1, c1, c2) = (1.1, 0.8, 2.3, 1.9);
        let (x, y) = (0.25, 0.2);
        let params = ParameterSet::real(a, b1, 9.9, c1, c2);
        let d = DiscreteParams::V1 {
            t1: c(1.0, 0.0),
            t2: c(1.0, 0.0),
            k1: 0,
            k2: 0,
        };
        let engine = eval_humbert(HumbertKind::Psi1, &params, &d, EvalPoint::real(x, y), &cfg())
            .unwrap();
        let mut oracle = 0.0f64;
        for m in 0..60usize {
            for n in 0..60usize {
                let mut term = 1.0;
                for j in 0..m + n {
                    term *= a + j as f64;
                }
                for j in 0..m {
                    term *= (b1 + j as f64) / (c1 + j as f64) / (j as f64 + 1.0);
                }
                for j in 0..n {
                    term /= (c2 + j as f64) * (j as f64 + 1.0);
                }
                oracle += term * x.powi(m as i32) * y.powi(n as i32);
            }
        }
        assert!(rel(engine.value, c(oracle, 0.0)) < 1e-12, "{} vs {oracle}", engine.value);
    }

    #[test]
    fn extrapolation_recovers_polynomial_limit() {
        let eps = [1e-2, 1e-3, 1e-4];
        let values: Vec<Complex64> = eps
            .iter()
            .map(|&e| c(3.0 + 2.0 * e + 5.0 * e * e, -1.0 + 0.5 * e))
            .collect();
        let lim = extrapolate_to_zero(&eps, &values);
        assert!(rel(lim, c(3.0, -1.0)) < 1e-12, "{lim}");
    }

    #[test]
    fn humbert_limit_terminating_point() {
        let params = ParameterSet::real(1.2, 0.9, 1.4, 2.2, 1.7);
        let d = DiscreteParams::V1 {
            t1: c(2.0, 0.0),
            t2: c(2.0, 0.0),
            k1: 1,
            k2: 1,
        };
        let p = EvalPoint::real(0.3, 0.2);
        for kind in [HumbertKind::Psi1, HumbertKind::Psi2] {
            let out =
                check_humbert_limit(kind, &params, &d, p, &[1e-2, 1e-3, 1e-4], &cfg()).unwrap();
            assert!(out.passed, "{kind:?}: residual {}", out.abs_residual);
        }
    }

    #[test]
    fn humbert_limit_reproduces_classical_relation_at_zero_steps() {
        // k1 = k2 = 0 is the classical confluence: the 1/eps limit of the
        // plain double series lands on classical psi1.
        let params = ParameterSet::real(1.1, 0.8, 5.0, 2.3, 1.9);
        let d = DiscreteParams::V1 {
            t1: c(1.0, 0.0),
            t2: c(1.0, 0.0),
            k1: 0,
            k2: 0,
        };
        let out = check_humbert_limit(
            HumbertKind::Psi1,
            &params,
            &d,
            EvalPoint::real(0.25, 0.2),
            &[1e-2, 1e-3, 1e-4],
            &cfg(),
        )
        .unwrap();
        assert!(out.passed, "residual {}", out.abs_residual);
    }

    #[test]
    fn humbert_limit_origin_residual_is_zero() {
        let params = ParameterSet::real(1.2, 0.9, 1.4, 2.2, 1.7);
        let d = DiscreteParams::V2 { t: c(2.0, 0.0), k: 1 };
        let out = check_humbert_limit(
            HumbertKind::Psi1,
            &params,
            &d,
            EvalPoint::origin(),
            &[1e-2, 1e-3, 1e-4],
            &cfg(),
        )
        .unwrap();
        assert_eq!(out.abs_residual, 0.0);
    }

    #[test]
    fn divergence_honesty_for_non_integer_t() {
        // k = 1, t = 0.5, x = 0.5, y = 0: the term magnitudes carry m! growth
        // and the engine must say so.
        let params = ParameterSet::real(1.3, 0.7, 1.1, 2.2, 1.9);
        let d = DiscreteParams::V1 {
            t1: c(0.5, 0.0),
            t2: c(2.0, 0.0),
            k1: 1,
            k2: 1,
        };
        let out = eval_discrete_f2(&params, &d, EvalPoint::real(0.5, 0.0), &cfg());
        assert!(matches!(out, Err(EvalError::Divergence { .. })), "{out:?}");
    }

    #[test]
    fn region_check_rejects_non_terminating_outside_disc() {
        let params = ParameterSet::real(1.3, 0.7, 1.1, 2.2, 1.9);
        let out = eval_f2(&params, EvalPoint::real(0.8, 0.4), &cfg());
        assert!(matches!(out, Err(EvalError::Divergence { .. })));
    }

    #[test]
    fn pole_in_c1_is_reported_unless_cut_off() {
        let mut params = ParameterSet::real(1.3, 0.7, 1.1, -1.0, 1.9);
        let p = EvalPoint::real(0.2, 0.2);
        let free = DiscreteParams::V1 {
            t1: c(0.5, 0.0),
            t2: c(0.5, 0.0),
            k1: 0,
            k2: 0,
        };
        assert!(matches!(
            eval_discrete_f2(&params, &free, p, &cfg()),
            Err(EvalError::Pole(_))
        ));
        // With m cut at 1 the pole index 1 is never reached.
        params.b1 = c(-1.0, 0.0);
        assert!(eval_discrete_f2(&params, &free, p, &cfg()).is_ok());
    }
}
