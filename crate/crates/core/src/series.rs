//! Double-series summation over anti-diagonals, with termination, truncation
//! and divergence control, and the general Kampé de Fériet evaluator.
//!
//! The engine's contract is built on term *ratios*, not terms: the caller
//! supplies `T(m+1,n)/T(m,n)` and `T(m,n+1)/T(m,n)` for a coefficient array
//! with `T(0,0) = 1`, and the engine sums `T(m,n) x^m y^n` by expanding
//! anti-diagonals `m + n = d`. Ratios keep the per-term work O(1) and avoid
//! overflowing products such as `(a)_{m+n} (-t)_{mk}`.

use crate::error::{EvalError, Result};
use crate::gamma::nearest_nonnegative_integer;
use num_complex::Complex64;
use serde::Serialize;

/// A summation index pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TermIndex {
    pub m: u32,
    pub n: u32,
}

/// How a summation run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    /// Every term beyond the last evaluated anti-diagonal is provably zero.
    Terminated,
    /// Anti-diagonal sums stayed below tolerance for a full window.
    Converged,
    /// The diagonal budget ran out before any other criterion fired.
    MaxTermsReached,
    /// Anti-diagonal magnitudes grew monotonically past the probe depth.
    DivergenceDetected,
}

/// A complex evaluation result with truncation diagnostics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeriesValue {
    #[serde(serialize_with = "crate::serde_util::complex")]
    pub value: Complex64,
    pub terms_used: usize,
    #[serde(serialize_with = "crate::serde_util::finite_f64")]
    pub tail_estimate: f64,
    pub status: Status,
}

/// Engine configuration.
#[derive(Debug, Clone, Copy)]
pub struct SummationConfig {
    /// Relative tolerance for the convergence criterion.
    pub rel_tolerance: f64,
    /// Largest anti-diagonal index the engine will expand.
    pub max_diagonal: usize,
    /// Number of consecutive diagonals required by the convergence and
    /// divergence criteria.
    pub divergence_window: usize,
}

impl Default for SummationConfig {
    fn default() -> Self {
        SummationConfig {
            rel_tolerance: 1e-14,
            max_diagonal: 512,
            divergence_window: 8,
        }
    }
}

impl SummationConfig {
    fn validate(&self) -> Result<()> {
        if self.rel_tolerance <= 0.0 || !self.rel_tolerance.is_finite() {
            return Err(EvalError::Config(format!(
                "rel_tolerance must be positive and finite, got {}",
                self.rel_tolerance
            )));
        }
        if self.max_diagonal < 1 {
            return Err(EvalError::Config("max_diagonal must be >= 1".into()));
        }
        if self.divergence_window < 1 {
            return Err(EvalError::Config("divergence_window must be >= 1".into()));
        }
        Ok(())
    }
}

/// Caller-provided knowledge about where the coefficient array is provably
/// zero: `T(m,n) = 0` whenever `m > m_bound`, `n > n_bound`, or
/// `m + n > diagonal_bound` (each bound independently optional).
///
/// This is the "terminating Pochhammer" flag of the engine contract; it is
/// what turns an identity check into an exact finite sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TerminationBounds {
    pub m_bound: Option<usize>,
    pub n_bound: Option<usize>,
    pub diagonal_bound: Option<usize>,
}

impl TerminationBounds {
    pub const NONE: TerminationBounds = TerminationBounds {
        m_bound: None,
        n_bound: None,
        diagonal_bound: None,
    };

    /// Anti-diagonal index beyond which every term is provably zero, when
    /// the bounds terminate the series in all directions.
    pub fn horizon(&self) -> Option<usize> {
        let rect = match (self.m_bound, self.n_bound) {
            (Some(m), Some(n)) => Some(m + n),
            _ => None,
        };
        match (self.diagonal_bound, rect) {
            (Some(d), Some(r)) => Some(d.min(r)),
            (Some(d), None) => Some(d),
            (None, Some(r)) => Some(r),
            (None, None) => None,
        }
    }

    /// Pointwise minimum of two bound sets.
    pub fn merge(self, other: TerminationBounds) -> TerminationBounds {
        fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
            match (a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            }
        }
        TerminationBounds {
            m_bound: min_opt(self.m_bound, other.m_bound),
            n_bound: min_opt(self.n_bound, other.n_bound),
            diagonal_bound: min_opt(self.diagonal_bound, other.diagonal_bound),
        }
    }

    fn contains(&self, m: usize, n: usize) -> bool {
        self.m_bound.is_none_or(|b| m <= b)
            && self.n_bound.is_none_or(|b| n <= b)
            && self.diagonal_bound.is_none_or(|b| m + n <= b)
    }
}

/// Sum `T(m,n) x^m y^n` over anti-diagonals.
///
/// `term_ratio_m(m, n)` must return `T(m+1,n)/T(m,n)` and `term_ratio_n(m, n)`
/// must return `T(m,n+1)/T(m,n)`, both as closed-form rational expressions
/// (never by dividing terms, so that exact zeros propagate).
pub fn sum_double_series<Rm, Rn>(
    term_ratio_m: Rm,
    term_ratio_n: Rn,
    x: Complex64,
    y: Complex64,
    bounds: TerminationBounds,
    cfg: &SummationConfig,
) -> Result<SeriesValue>
where
    Rm: Fn(u32, u32) -> Complex64,
    Rn: Fn(u32, u32) -> Complex64,
{
    sum_double_series_weighted(&term_ratio_m, &term_ratio_n, x, y, bounds, cfg, None)
}

/// Weight applied to each term at accumulation time; the recurrence itself
/// stays unweighted. Used by the operator algebra for exact term-wise
/// Euler-operator application.
pub type WeightFn<'a> = &'a dyn Fn(TermIndex) -> Complex64;

/// [`sum_double_series`] with an optional accumulation weight `w(m,n)`,
/// summing `w(m,n) T(m,n) x^m y^n`.
pub fn sum_double_series_weighted(
    term_ratio_m: &dyn Fn(u32, u32) -> Complex64,
    term_ratio_n: &dyn Fn(u32, u32) -> Complex64,
    x: Complex64,
    y: Complex64,
    bounds: TerminationBounds,
    cfg: &SummationConfig,
    weight: Option<WeightFn<'_>>,
) -> Result<SeriesValue> {
    cfg.validate()?;

    // The probe depth below which the divergence heuristic stays quiet.
    const DIVERGENCE_PROBE_DEPTH: usize = 16;

    let horizon = bounds.horizon();
    let fully_terminating = horizon.is_some();

    let apply_weight = |m: usize, n: usize, u: Complex64| -> Complex64 {
        match weight {
            Some(w) => {
                u * w(TermIndex {
                    m: m as u32,
                    n: n as u32,
                })
            }
            None => u,
        }
    };

    let mut acc = Complex64::new(0.0, 0.0);
    let mut terms_used = 0usize;
    let mut prev: Vec<Complex64> = Vec::new();
    let mut last_diag_abs = 0.0f64;
    let mut small_run = 0usize;
    let mut growth_run = 0usize;
    let mut seen_nonzero = false;

    for d in 0..=cfg.max_diagonal {
        if let Some(h) = horizon {
            if d > h {
                return Ok(SeriesValue {
                    value: acc,
                    terms_used,
                    tail_estimate: 0.0,
                    status: Status::Terminated,
                });
            }
        }

        let mut current = vec![Complex64::new(0.0, 0.0); d + 1];
        let mut diag_abs = 0.0f64;
        for m in 0..=d {
            let n = d - m;
            if !bounds.contains(m, n) {
                continue;
            }
            let u = if d == 0 {
                Complex64::new(1.0, 0.0)
            } else if m == 0 {
                prev[0] * term_ratio_n(0, (n - 1) as u32) * y
            } else {
                prev[m - 1] * term_ratio_m((m - 1) as u32, n as u32) * x
            };
            if !u.re.is_finite() || !u.im.is_finite() {
                return Ok(SeriesValue {
                    value: acc,
                    terms_used,
                    tail_estimate: f64::INFINITY,
                    status: Status::DivergenceDetected,
                });
            }
            current[m] = u;
            let contribution = apply_weight(m, n, u);
            acc += contribution;
            diag_abs += contribution.norm();
            terms_used += 1;
        }

        if diag_abs > 0.0 {
            seen_nonzero = true;
        }
        if !fully_terminating && d > 0 {
            // Convergence: a full window of negligible diagonals. A leading
            // all-zero stretch (a weight can blank out low indices) does not
            // count until either a nonzero diagonal appeared or the probe
            // depth is past.
            if diag_abs <= cfg.rel_tolerance * acc.norm().max(1.0)
                && (seen_nonzero || d > DIVERGENCE_PROBE_DEPTH)
            {
                small_run += 1;
                if small_run >= cfg.divergence_window {
                    return Ok(SeriesValue {
                        value: acc,
                        terms_used,
                        tail_estimate: diag_abs,
                        status: Status::Converged,
                    });
                }
            } else {
                small_run = 0;
            }
            // Divergence: sustained monotone growth beyond the probe depth.
            if d > DIVERGENCE_PROBE_DEPTH && diag_abs > last_diag_abs {
                growth_run += 1;
                if growth_run >= cfg.divergence_window {
                    return Ok(SeriesValue {
                        value: acc,
                        terms_used,
                        tail_estimate: f64::INFINITY,
                        status: Status::DivergenceDetected,
                    });
                }
            } else if d > DIVERGENCE_PROBE_DEPTH {
                growth_run = 0;
            }
        }

        last_diag_abs = diag_abs;
        prev = current;
    }

    if let Some(h) = horizon {
        if h <= cfg.max_diagonal {
            // Loop ran out exactly at the horizon.
            return Ok(SeriesValue {
                value: acc,
                terms_used,
                tail_estimate: 0.0,
                status: Status::Terminated,
            });
        }
    }
    Ok(SeriesValue {
        value: acc,
        terms_used,
        tail_estimate: last_diag_abs,
        status: Status::MaxTermsReached,
    })
}

/// Parameter rows of a Kampé de Fériet double series
/// `F(..) = Σ Π(a_i)_{m+n} Π(b_i)_m Π(c_i)_n / (Π(d_i)_{m+n} Π(e_i)_m Π(f_i)_n) x^m y^n / (m! n!)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KdFSpec {
    /// Joint numerator row, indexed by m + n.
    pub upper_joint: Vec<Complex64>,
    /// Numerator row indexed by m.
    pub upper_x: Vec<Complex64>,
    /// Numerator row indexed by n.
    pub upper_y: Vec<Complex64>,
    /// Joint denominator row.
    pub lower_joint: Vec<Complex64>,
    /// Denominator row indexed by m.
    pub lower_x: Vec<Complex64>,
    /// Denominator row indexed by n.
    pub lower_y: Vec<Complex64>,
}

impl KdFSpec {
    /// Termination bounds implied by near-integer numerator parameters.
    pub fn termination_bounds(&self) -> TerminationBounds {
        TerminationBounds {
            m_bound: row_bound(&self.upper_x),
            n_bound: row_bound(&self.upper_y),
            diagonal_bound: row_bound(&self.upper_joint),
        }
    }

    /// Checks that no denominator parameter hits a non-positive integer at a
    /// reachable index.
    fn check_poles(&self) -> Result<()> {
        let b = self.termination_bounds();
        fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
            match (a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            }
        }
        // The largest m (respectively n) index with a potentially nonzero
        // term is capped by both the direction bound and the diagonal bound.
        check_row_poles(&self.lower_joint, b.horizon())?;
        check_row_poles(&self.lower_x, min_opt(b.m_bound, b.diagonal_bound))?;
        check_row_poles(&self.lower_y, min_opt(b.n_bound, b.diagonal_bound))?;
        Ok(())
    }
}

/// Smallest q such that a row parameter is (within pole tolerance) -q with
/// q >= 0; the row's Pochhammer product then vanishes beyond index q.
fn row_bound(row: &[Complex64]) -> Option<usize> {
    row.iter()
        .filter_map(|&p| nearest_nonnegative_integer(-p).map(|q| q as usize))
        .min()
}

fn check_row_poles(row: &[Complex64], reach: Option<usize>) -> Result<()> {
    for &p in row {
        if let Some(q) = nearest_nonnegative_integer(-p) {
            let hit = match reach {
                Some(bound) => (q as usize) < bound,
                None => true,
            };
            if hit {
                return Err(EvalError::Pole(p));
            }
        }
    }
    Ok(())
}

fn row_product(row: &[Complex64], idx: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for &p in row {
        acc *= p + idx as f64;
    }
    acc
}

/// Evaluate a Kampé de Fériet series by term-ratio recurrences.
///
/// Reports [`EvalError::Divergence`] when the engine detects growth and
/// [`EvalError::Pole`] when a denominator parameter is a non-positive
/// integer that the series reaches before terminating.
pub fn eval_kdf(
    spec: &KdFSpec,
    x: Complex64,
    y: Complex64,
    cfg: &SummationConfig,
) -> Result<SeriesValue> {
    eval_kdf_weighted(spec, x, y, cfg, None)
}

/// [`eval_kdf`] with an accumulation weight (operator-algebra support).
pub fn eval_kdf_weighted(
    spec: &KdFSpec,
    x: Complex64,
    y: Complex64,
    cfg: &SummationConfig,
    weight: Option<WeightFn<'_>>,
) -> Result<SeriesValue> {
    spec.check_poles()?;
    let bounds = spec.termination_bounds();
    let ratio_m = |m: u32, n: u32| {
        row_product(&spec.upper_joint, m + n) * row_product(&spec.upper_x, m)
            / (row_product(&spec.lower_joint, m + n)
                * row_product(&spec.lower_x, m)
                * (m as f64 + 1.0))
    };
    let ratio_n = |m: u32, n: u32| {
        row_product(&spec.upper_joint, m + n) * row_product(&spec.upper_y, n)
            / (row_product(&spec.lower_joint, m + n)
                * row_product(&spec.lower_y, n)
                * (n as f64 + 1.0))
    };
    let out = sum_double_series_weighted(&ratio_m, &ratio_n, x, y, bounds, cfg, weight)?;
    if out.status == Status::DivergenceDetected {
        return Err(EvalError::Divergence { partial: out });
    }
    Ok(out)
}
