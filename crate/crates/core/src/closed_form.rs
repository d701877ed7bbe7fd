//! Closed-form linking number of two straight segments from their isometry
//! invariants.
//!
//! ```text
//! lk = [AT(a1,b2) + AT(b1,a2) - AT(a1,a2) - AT(b1,b2)] / 4π
//! AT(a,b; d,α) = atan( (ab sinα + d² cotα) / (d sqrt(a² + b² - 2ab cosα + d²)) )
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::geom::Segment;
use crate::invariants::{extract_invariants, SegmentPairInvariants, PARALLEL_EPS};

/// Relative threshold on `|d|` (scaled by the largest endpoint coordinate,
/// floored at 1) below which a pair counts as coplanar.
pub const COPLANAR_EPS: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosedFormError {
    #[error("non-finite argument")]
    NonFinite,
    #[error("argument {name} = {value} must be positive")]
    NonPositive { name: &'static str, value: f64 },
}

/// Which rule produced an [`LkResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LkBranch {
    Generic,
    Parallel,
    CoplanarD0,
    Degenerate,
}

impl LkBranch {
    pub const ALL: [LkBranch; 4] = [
        LkBranch::Generic,
        LkBranch::Parallel,
        LkBranch::CoplanarD0,
        LkBranch::Degenerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LkBranch::Generic => "generic",
            LkBranch::Parallel => "parallel",
            LkBranch::CoplanarD0 => "coplanar_d0",
            LkBranch::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LkResult {
    pub value: f64,
    pub branch: LkBranch,
}

impl LkResult {
    fn zero(branch: LkBranch) -> Self {
        Self { value: 0.0, branch }
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[inline]
fn at_raw(a: f64, b: f64, d: f64, sin_a: f64, cos_a: f64) -> f64 {
    if sin_a <= PARALLEL_EPS {
        return sign(d) * FRAC_PI_2;
    }
    if d == 0.0 {
        return 0.0;
    }
    let cot = cos_a / sin_a;
    let num = a * b * sin_a + d * d * cot;
    let den = d * (a * a + b * b - 2.0 * a * b * cos_a + d * d).sqrt();
    (num / den).atan()
}

/// The arctangent building block `AT(a, b; d, alpha)`.
///
/// For `alpha` within [`PARALLEL_EPS`] of `0` or `π` this is `sign(d)·π/2`.
/// At `d == 0` the expression is undefined and `0` is returned; use
/// [`lk_from_invariants`], which handles coplanar pairs before consulting it.
pub fn at_term(a: f64, b: f64, d: f64, alpha: f64) -> Result<f64, ClosedFormError> {
    if !(a.is_finite() && b.is_finite() && d.is_finite() && alpha.is_finite()) {
        return Err(ClosedFormError::NonFinite);
    }
    let (sin_a, cos_a) = alpha.sin_cos();
    Ok(at_raw(a, b, d, sin_a, cos_a))
}

/// Linking number of a segment pair given by its invariants.
///
/// Flagged pairs (degenerate, parallel) and coplanar pairs return zero with
/// the matching branch. Across `d = 0` the true function jumps by `±1/2` when
/// the projections cross; the [`LkBranch::CoplanarD0`] branch lets callers
/// detect that case.
pub fn lk_from_invariants(inv: &SegmentPairInvariants) -> LkResult {
    if inv.is_degenerate() {
        return LkResult::zero(LkBranch::Degenerate);
    }
    if inv.flags.parallel {
        return LkResult::zero(LkBranch::Parallel);
    }
    if inv.d.abs() <= COPLANAR_EPS * inv.coordinate_scale() {
        return LkResult::zero(LkBranch::CoplanarD0);
    }
    let (sin_a, cos_a) = inv.alpha.sin_cos();
    let at = |a, b| at_raw(a, b, inv.d, sin_a, cos_a);
    let sum = at(inv.a1, inv.b2) + at(inv.b1, inv.a2) - at(inv.a1, inv.a2) - at(inv.b1, inv.b2);
    LkResult {
        value: sum / (4.0 * PI),
        branch: LkBranch::Generic,
    }
}

/// Linking number of two oriented segments.
pub fn lk_segments(s1: &Segment, s2: &Segment) -> LkResult {
    lk_from_invariants(&extract_invariants(s1, s2))
}

/// Linking number of simple orthogonal segments: both start at the feet of
/// their common perpendicular, and `(L1, L2, O1O2)` is a positive orthogonal
/// frame with `|O1O2| = d`.
pub fn lk_simple_orthogonal(l1: f64, l2: f64, d: f64) -> Result<f64, ClosedFormError> {
    for (name, value) in [("l1", l1), ("l2", l2), ("d", d)] {
        if !value.is_finite() {
            return Err(ClosedFormError::NonFinite);
        }
        if value <= 0.0 {
            return Err(ClosedFormError::NonPositive { name, value });
        }
    }
    let x = l1 * l2 / (d * (l1 * l1 + l2 * l2 + d * d).sqrt());
    Ok(-x.atan() / (4.0 * PI))
}

/// True when both endpoint coordinate ranges straddle their line origins, i.e.
/// the projections of the two segments to the mid-plane cross.
pub fn projections_cross(inv: &SegmentPairInvariants) -> bool {
    !inv.flags.any() && inv.a1 < 0.0 && inv.b1 > 0.0 && inv.a2 < 0.0 && inv.b2 > 0.0
}
