//! Executable catalog of the identities satisfied by the discrete Appell
//! functions: difference/differential formulas, finite and infinite
//! summations, s-step recursions, the ten ladder relations per flavor, the
//! 45 pairwise contiguous relations generated from them, reductions,
//! Humbert limits, integral representations, and the difference equations.
//!
//! Each check evaluates both sides of one identity instance numerically and
//! reports the residual. Pass thresholds are 1e-10 relative for identities
//! whose every evaluation is a terminating (exact) sum and 1e-8 for
//! truncated or extrapolated families.

mod checks;
mod ladders;
mod suite;

pub use checks::{check_diff_formula, check_recursion, check_summation, DiffFormula, RecursionFormula, SummationFormula};
pub use ladders::{
    check_ladder, check_pairwise, explicit_pair_list, generate_ladder_relations, LadderFlavor,
    LadderTag, ALL_LADDER_TAGS,
};
pub use suite::{
    catalog_ids, check_reduction, default_grid, run_suite, run_suite_with, GridPoint,
    ReductionKind, SuiteReport, SuiteSummary,
};

use crate::appell::{DiscreteParams, EvalPoint, ParameterSet};
use num_complex::Complex64;
use serde::Serialize;
use std::fmt;

/// Identity families, in catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityFamily {
    Reduction,
    DiffOpFormula,
    DiffFormula,
    FiniteSum,
    InfiniteSum,
    Recursion,
    LadderDifferential,
    LadderDifference,
    PairwiseDifferential,
    PairwiseDifference,
    HumbertLimit,
    IntegralRep,
    DifferenceEq,
}

impl IdentityFamily {
    pub const ALL: [IdentityFamily; 13] = [
        IdentityFamily::Reduction,
        IdentityFamily::DiffOpFormula,
        IdentityFamily::DiffFormula,
        IdentityFamily::FiniteSum,
        IdentityFamily::InfiniteSum,
        IdentityFamily::Recursion,
        IdentityFamily::LadderDifferential,
        IdentityFamily::LadderDifference,
        IdentityFamily::PairwiseDifferential,
        IdentityFamily::PairwiseDifference,
        IdentityFamily::HumbertLimit,
        IdentityFamily::IntegralRep,
        IdentityFamily::DifferenceEq,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityFamily::Reduction => "reduction",
            IdentityFamily::DiffOpFormula => "diff-op-formula",
            IdentityFamily::DiffFormula => "diff-formula",
            IdentityFamily::FiniteSum => "finite-sum",
            IdentityFamily::InfiniteSum => "infinite-sum",
            IdentityFamily::Recursion => "recursion",
            IdentityFamily::LadderDifferential => "ladder-differential",
            IdentityFamily::LadderDifference => "ladder-difference",
            IdentityFamily::PairwiseDifferential => "pairwise-differential",
            IdentityFamily::PairwiseDifference => "pairwise-difference",
            IdentityFamily::HumbertLimit => "humbert-limit",
            IdentityFamily::IntegralRep => "integral-rep",
            IdentityFamily::DifferenceEq => "difference-eq",
        }
    }

    /// Parse a family name; "integral" is accepted for the integral family.
    pub fn parse(name: &str) -> Option<IdentityFamily> {
        let name = name.trim().to_ascii_lowercase();
        if name == "integral" {
            return Some(IdentityFamily::IntegralRep);
        }
        IdentityFamily::ALL.into_iter().find(|f| f.name() == name)
    }
}

impl fmt::Display for IdentityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for IdentityFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Which discrete analogue an identity instance refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariantTag {
    V1,
    V2,
}

impl VariantTag {
    pub fn name(&self) -> &'static str {
        match self {
            VariantTag::V1 => "v1",
            VariantTag::V2 => "v2",
        }
    }

    pub fn parse(name: &str) -> Option<VariantTag> {
        match name.trim().to_ascii_lowercase().as_str() {
            "v1" => Some(VariantTag::V1),
            "v2" => Some(VariantTag::V2),
            _ => None,
        }
    }
}

impl fmt::Display for VariantTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Identifies one identity in the catalog: family, variant, and a
/// family-specific detail tag (which ladder pair, which r or s, ...).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IdentityId {
    pub family: IdentityFamily,
    pub variant: VariantTag,
    pub detail: String,
}

impl IdentityId {
    pub fn new(family: IdentityFamily, variant: VariantTag, detail: impl Into<String>) -> Self {
        IdentityId {
            family,
            variant,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.family, self.variant, self.detail)
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Full parameter/argument record of one identity evaluation.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PointRecord {
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub a: Option<Complex64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub b1: Option<Complex64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub b2: Option<Complex64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub c1: Option<Complex64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub c2: Option<Complex64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub t1: Option<Complex64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub t2: Option<Complex64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub t: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub x: Option<Complex64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub y: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::complex_opt"
    )]
    pub z: Option<Complex64>,
}

impl PointRecord {
    pub fn from_parts(
        params: &ParameterSet,
        d: Option<&DiscreteParams>,
        p: Option<EvalPoint>,
    ) -> Self {
        let mut rec = PointRecord {
            a: Some(params.a),
            b1: Some(params.b1),
            b2: Some(params.b2),
            c1: Some(params.c1),
            c2: Some(params.c2),
            ..Default::default()
        };
        if let Some(d) = d {
            match *d {
                DiscreteParams::V1 { t1, t2, k1, k2 } => {
                    rec.t1 = Some(t1);
                    rec.t2 = Some(t2);
                    rec.k1 = Some(k1);
                    rec.k2 = Some(k2);
                }
                DiscreteParams::V2 { t, k } => {
                    rec.t = Some(t);
                    rec.k = Some(k);
                }
                DiscreteParams::V3 { t1, t2, k } => {
                    rec.t1 = Some(t1);
                    rec.t2 = Some(t2);
                    rec.k = Some(k);
                }
            }
        }
        if let Some(p) = p {
            rec.x = Some(p.x);
            rec.y = Some(p.y);
        }
        rec
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_s(mut self, s: usize) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_z(mut self, z: Complex64) -> Self {
        self.z = Some(z);
        self
    }
}

/// Result of one identity instance: both sides, residuals, verdict.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheckResult {
    pub id: IdentityId,
    pub point: PointRecord,
    #[serde(serialize_with = "crate::serde_util::complex")]
    pub lhs: Complex64,
    #[serde(serialize_with = "crate::serde_util::complex")]
    pub rhs: Complex64,
    #[serde(serialize_with = "crate::serde_util::finite_f64")]
    pub abs_residual: f64,
    #[serde(serialize_with = "crate::serde_util::finite_f64")]
    pub rel_residual: f64,
    pub passed: bool,
    pub notes: String,
}

impl IdentityCheckResult {
    /// Builds a result from both sides with pass decided at `tolerance`
    /// (relative to the larger side).
    pub fn from_sides(
        id: IdentityId,
        point: PointRecord,
        lhs: Complex64,
        rhs: Complex64,
        tolerance: f64,
    ) -> Self {
        let scale = lhs.norm().max(rhs.norm());
        let abs_residual = (lhs - rhs).norm();
        let rel_residual = if scale == 0.0 {
            0.0
        } else {
            abs_residual / scale
        };
        IdentityCheckResult {
            id,
            point,
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            passed: rel_residual <= tolerance,
            notes: format!("tolerance {tolerance:.1e}"),
        }
    }

    /// A result representing a check skipped at this point (precondition
    /// violated). Skips are vacuously passing rows; they are counted
    /// separately in suite summaries through the notes marker.
    pub fn skipped(id: IdentityId, point: PointRecord, reason: impl fmt::Display) -> Self {
        IdentityCheckResult {
            id,
            point,
            lhs: Complex64::new(0.0, 0.0),
            rhs: Complex64::new(0.0, 0.0),
            abs_residual: 0.0,
            rel_residual: 0.0,
            passed: true,
            notes: format!("skipped: {reason}"),
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.notes.starts_with("skipped:")
    }
}

/// Family tolerances: exact (terminating) identities and truncated ones.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub terminating: f64,
    pub truncated: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            terminating: 1e-10,
            truncated: 1e-8,
        }
    }
}
