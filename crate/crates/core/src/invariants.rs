//! Isometry invariants of a pair of oriented segments.
//!
//! A non-parallel pair is described up to rigid motion by six numbers:
//! the angle `alpha` between the directions, the signed distance `d` between
//! the two parallel planes carrying the segments, and the coordinates
//! `a_i <= b_i` of each segment's endpoints along its own line, measured from
//! the foot `O_i` of the common perpendicular.
//!
//! In the canonical frame the planes are `z = ∓d/2`, the `x`-axis bisects the
//! angle between the projected lines, and segment `i` is
//! `((a_i + l_i t) cos(α/2), (-1)^i (a_i + l_i t) sin(α/2), (-1)^i d/2)`, `t ∈ [0, 1]`.
//!
//! Swapping the two segments leaves `alpha` and `d` unchanged and exchanges
//! `(a1, b1)` with `(a2, b2)`: the triple product `[L2, L1, A2A1]` equals
//! `[L1, L2, A1A2]`.

use thiserror::Error;

use crate::geom::{Segment, Vec3};

/// Relative threshold on `|L1 × L2| / (l1 l2)` below which a pair is parallel.
pub const PARALLEL_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantsError {
    #[error("parallel segments have no canonical placement")]
    Parallel,
    #[error("degenerate (zero-length) segment has no canonical placement")]
    Degenerate,
    #[error("angle {0} must lie strictly inside (0, pi)")]
    AngleOutOfRange(f64),
    #[error("non-finite invariant value")]
    NonFinite,
    #[error("segment {0} has b < a")]
    NegativeLength(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InvariantFlags {
    pub parallel: bool,
    pub degenerate1: bool,
    pub degenerate2: bool,
}

impl InvariantFlags {
    pub fn any(&self) -> bool {
        self.parallel || self.degenerate1 || self.degenerate2
    }
}

/// The six isometry invariants of an oriented segment pair.
///
/// When any flag is set, only `alpha` (for parallel pairs) and the lengths
/// carry meaning; the remaining fields are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPairInvariants {
    pub alpha: f64,
    pub d: f64,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub flags: InvariantFlags,
}

impl SegmentPairInvariants {
    /// Invariants of a non-parallel, non-degenerate pair.
    pub fn new(alpha: f64, d: f64, a1: f64, b1: f64, a2: f64, b2: f64) -> Self {
        Self {
            alpha,
            d,
            a1,
            b1,
            a2,
            b2,
            flags: InvariantFlags::default(),
        }
    }

    pub fn l1(&self) -> f64 {
        self.b1 - self.a1
    }

    pub fn l2(&self) -> f64 {
        self.b2 - self.a2
    }

    /// Largest magnitude among the endpoint coordinates, floored at 1.
    pub fn coordinate_scale(&self) -> f64 {
        [self.a1, self.b1, self.a2, self.b2]
            .iter()
            .fold(1.0_f64, |m, v| m.max(v.abs()))
    }

    /// Field-wise maximum absolute difference over `alpha, d, a1, b1, a2, b2`.
    pub fn max_field_diff(&self, other: &SegmentPairInvariants) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields().iter())
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
    }

    pub fn fields(&self) -> [f64; 6] {
        [self.alpha, self.d, self.a1, self.b1, self.a2, self.b2]
    }

    pub fn is_parallel(&self) -> bool {
        self.flags.parallel
    }

    pub fn is_degenerate(&self) -> bool {
        self.flags.degenerate1 || self.flags.degenerate2
    }
}

/// Computes the invariants of `s1`, `s2` from their endpoints.
///
/// Degenerate segments set the matching `degenerate` flag; pairs with
/// `|L1 × L2| <= PARALLEL_EPS · l1 l2` set `parallel` and leave `d`, `a_i`,
/// `b_i` at zero.
pub fn extract_invariants(s1: &Segment, s2: &Segment) -> SegmentPairInvariants {
    let dir1 = s1.direction();
    let dir2 = s2.direction();
    let l1 = dir1.norm();
    let l2 = dir2.norm();

    let mut flags = InvariantFlags {
        parallel: false,
        degenerate1: l1 == 0.0,
        degenerate2: l2 == 0.0,
    };
    let mut out = SegmentPairInvariants {
        alpha: 0.0,
        d: 0.0,
        a1: 0.0,
        b1: l1,
        a2: 0.0,
        b2: l2,
        flags,
    };
    if flags.degenerate1 || flags.degenerate2 {
        return out;
    }

    let e1 = dir1 * (1.0 / l1);
    let e2 = dir2 * (1.0 / l2);
    let normal = dir1.cross(dir2);
    let normal_len = normal.norm();
    let cos_alpha = (dir1.dot(dir2) / (l1 * l2)).clamp(-1.0, 1.0);
    // atan2 keeps full precision near 0 and π where acos does not
    out.alpha = normal_len.atan2(dir1.dot(dir2));
    if normal_len <= PARALLEL_EPS * l1 * l2 {
        flags.parallel = true;
        out.flags = flags;
        return out;
    }

    let sin_alpha = normal_len / (l1 * l2);
    let sin2 = sin_alpha * sin_alpha;
    let w = s2.a - s1.a;
    out.d = normal.dot(w) / normal_len;
    out.a1 = (e2 * cos_alpha - e1).dot(w) / sin2;
    out.a2 = (e2 - e1 * cos_alpha).dot(w) / sin2;
    out.b1 = out.a1 + l1;
    out.b2 = out.a2 + l2;
    out
}

/// Canonical placement realising `inv`: segment `i` runs from `t = 0` to
/// `t = 1` of the parametrisation in the module docs.
pub fn reconstruct_segments(
    inv: &SegmentPairInvariants,
) -> Result<(Segment, Segment), InvariantsError> {
    if inv.flags.parallel {
        return Err(InvariantsError::Parallel);
    }
    if inv.is_degenerate() {
        return Err(InvariantsError::Degenerate);
    }
    if !inv.fields().iter().all(|v| v.is_finite()) {
        return Err(InvariantsError::NonFinite);
    }
    if !(inv.alpha > 0.0 && inv.alpha < std::f64::consts::PI) {
        return Err(InvariantsError::AngleOutOfRange(inv.alpha));
    }
    if inv.b1 < inv.a1 {
        return Err(InvariantsError::NegativeLength(1));
    }
    if inv.b2 < inv.a2 {
        return Err(InvariantsError::NegativeLength(2));
    }

    let (s, c) = (inv.alpha / 2.0).sin_cos();
    let h = inv.d / 2.0;
    let on_line1 = |u: f64| Vec3::new(u * c, -u * s, -h);
    let on_line2 = |u: f64| Vec3::new(u * c, u * s, h);
    Ok((
        Segment::new(on_line1(inv.a1), on_line1(inv.b1)),
        Segment::new(on_line2(inv.a2), on_line2(inv.b2)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    #[test]
    fn simple_orthogonal_configuration() {
        let s1 = Segment::new(v(0., 0., -0.5), v(1., 0., -0.5));
        let s2 = Segment::new(v(0., 0., 0.5), v(0., 1., 0.5));
        let inv = extract_invariants(&s1, &s2);
        assert!(!inv.flags.any());
        assert!((inv.alpha - FRAC_PI_2).abs() < 1e-15);
        assert!((inv.d - 1.0).abs() < 1e-15);
        assert!(inv.a1.abs() < 1e-15 && inv.a2.abs() < 1e-15);
        assert!((inv.b1 - 1.0).abs() < 1e-15 && (inv.b2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reconstruct_orthogonal_by_substitution() {
        let inv = SegmentPairInvariants::new(FRAC_PI_2, 1.0, 0.0, 1.0, 0.0, 1.0);
        let (s1, s2) = reconstruct_segments(&inv).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let close = |p: Vec3, q: Vec3| (p - q).norm() < 1e-15;
        assert!(close(s1.a, v(0., 0., -0.5)));
        assert!(close(s1.b, v(r, -r, -0.5)));
        assert!(close(s2.a, v(0., 0., 0.5)));
        assert!(close(s2.b, v(r, r, 0.5)));
    }

    #[test]
    fn negative_distance_reextracts() {
        let inv = SegmentPairInvariants::new(FRAC_PI_3, -2.0, -1.0, 1.0, -1.0, 1.0);
        let (s1, s2) = reconstruct_segments(&inv).unwrap();
        let back = extract_invariants(&s1, &s2);
        assert!((back.d + 2.0).abs() < 1e-12);
        assert!(back.max_field_diff(&inv) < 1e-12);
    }

    #[test]
    fn centred_crossing_with_negative_d() {
        // d < 0 with both segments centred on the common perpendicular
        let inv = SegmentPairInvariants::new(FRAC_PI_2, -1.0, -1.0, 1.0, -1.0, 1.0);
        let (s1, s2) = reconstruct_segments(&inv).unwrap();
        assert!((s1.length() - 2.0).abs() < 1e-15);
        let back = extract_invariants(&s1, &s2);
        assert!(back.max_field_diff(&inv) < 1e-14);
    }

    #[test]
    fn parallel_pair_is_flagged() {
        let s1 = Segment::new(v(0., 0., 0.), v(1., 0., 0.));
        let s2 = Segment::new(v(0., 1., 3.), v(-2., 1., 3.));
        let inv = extract_invariants(&s1, &s2);
        assert!(inv.flags.parallel);
        assert!((inv.alpha - PI).abs() < 1e-15);
        assert_eq!(
            reconstruct_segments(&inv).unwrap_err(),
            InvariantsError::Parallel
        );
    }

    #[test]
    fn nearly_parallel_above_threshold_is_finite() {
        let s1 = Segment::new(v(0., 0., 0.), v(1., 0., 0.));
        let s2 = Segment::new(v(0., 0., 1.), v(1., 1e-9, 1.));
        let inv = extract_invariants(&s1, &s2);
        assert!(!inv.flags.parallel);
        assert!(inv.fields().iter().all(|x| x.is_finite()));
    }

    #[test]
    fn degenerate_segment_is_flagged() {
        let s1 = Segment::new(v(1., 1., 1.), v(1., 1., 1.));
        let s2 = Segment::new(v(0., 0., 1.), v(1., 0., 1.));
        let inv = extract_invariants(&s1, &s2);
        assert!(inv.flags.degenerate1 && !inv.flags.degenerate2);
        assert_eq!(
            reconstruct_segments(&inv).unwrap_err(),
            InvariantsError::Degenerate
        );
    }

    #[test]
    fn reconstruct_rejects_bad_angles() {
        let inv = SegmentPairInvariants::new(0.0, 1.0, 0.0, 1.0, 0.0, 1.0);
        assert!(matches!(
            reconstruct_segments(&inv),
            Err(InvariantsError::AngleOutOfRange(_))
        ));
        let inv = SegmentPairInvariants::new(1.0, 1.0, 2.0, 1.0, 0.0, 1.0);
        assert_eq!(
            reconstruct_segments(&inv).unwrap_err(),
            InvariantsError::NegativeLength(1)
        );
    }

    #[test]
    fn swap_keeps_distance_and_exchanges_coordinates() {
        let s1 = Segment::new(v(0.3, -0.2, 0.1), v(1.1, 0.4, -0.5));
        let s2 = Segment::new(v(-0.7, 0.9, 0.8), v(0.2, -0.6, 1.3));
        let i12 = extract_invariants(&s1, &s2);
        let i21 = extract_invariants(&s2, &s1);
        assert!((i12.alpha - i21.alpha).abs() < 1e-15);
        assert!((i12.d - i21.d).abs() < 1e-14);
        assert!((i12.a1 - i21.a2).abs() < 1e-13);
        assert!((i12.b2 - i21.b1).abs() < 1e-13);
    }
}
