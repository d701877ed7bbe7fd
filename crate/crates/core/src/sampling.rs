//! Seeded random inputs for verification sweeps and property tests.
//!
//! All streams come from SplitMix64 seeded with a `u64`, so a seed fixes the
//! sequence of accepted pairs.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::geom::{segment_distance, Segment, Vec3};
use crate::invariants::{extract_invariants, SegmentPairInvariants};

pub type SweepRng = SplitMix64;

pub fn seeded(seed: u64) -> SweepRng {
    SplitMix64::seed_from_u64(seed)
}

/// Rejection thresholds for [`random_skew_pair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewPairBounds {
    /// Half-width of the coordinate cube endpoints are drawn from.
    pub half_width: f64,
    pub min_length: f64,
    pub min_distance: f64,
    pub min_sin_alpha: f64,
}

impl Default for SkewPairBounds {
    fn default() -> Self {
        Self {
            half_width: 1.0,
            min_length: 0.1,
            min_distance: 0.05,
            min_sin_alpha: 0.05,
        }
    }
}

pub fn random_point(rng: &mut impl Rng, half_width: f64) -> Vec3 {
    Vec3::new(
        rng.random_range(-half_width..=half_width),
        rng.random_range(-half_width..=half_width),
        rng.random_range(-half_width..=half_width),
    )
}

/// Endpoints uniform in a cube; pairs that are short, close or nearly
/// parallel are redrawn.
pub fn random_skew_pair(rng: &mut impl Rng, bounds: &SkewPairBounds) -> (Segment, Segment) {
    loop {
        let s1 = Segment::new(
            random_point(rng, bounds.half_width),
            random_point(rng, bounds.half_width),
        );
        let s2 = Segment::new(
            random_point(rng, bounds.half_width),
            random_point(rng, bounds.half_width),
        );
        if s1.length() < bounds.min_length || s2.length() < bounds.min_length {
            continue;
        }
        if segment_distance(&s1, &s2) < bounds.min_distance {
            continue;
        }
        let inv = extract_invariants(&s1, &s2);
        if inv.flags.any() || inv.alpha.sin() < bounds.min_sin_alpha {
            continue;
        }
        return (s1, s2);
    }
}

/// Ranges for [`random_invariants_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantBounds {
    /// `alpha` is drawn from `[margin, π - margin]`.
    pub alpha_margin: f64,
    /// `|d|` is drawn from `[d_min, d_max]` and given a random sign.
    pub d_min: f64,
    pub d_max: f64,
    /// Both endpoint coordinates `a_i < b_i` stay within `[-coord_max, coord_max]`.
    pub coord_max: f64,
    pub min_length: f64,
}

impl Default for InvariantBounds {
    fn default() -> Self {
        Self {
            alpha_margin: 0.05,
            d_min: 0.05,
            d_max: 2.0,
            coord_max: 3.0,
            min_length: 0.1,
        }
    }
}

/// Random invariant tuple within [`InvariantBounds::default`].
pub fn random_invariants(rng: &mut impl Rng) -> SegmentPairInvariants {
    random_invariants_with(rng, &InvariantBounds::default())
}

pub fn random_invariants_with(
    rng: &mut impl Rng,
    bounds: &InvariantBounds,
) -> SegmentPairInvariants {
    let alpha = rng.random_range(bounds.alpha_margin..=PI - bounds.alpha_margin);
    let mut d = rng.random_range(bounds.d_min..=bounds.d_max);
    if rng.random::<bool>() {
        d = -d;
    }
    let mut coords = || loop {
        let x = rng.random_range(-bounds.coord_max..=bounds.coord_max);
        let y = rng.random_range(-bounds.coord_max..=bounds.coord_max);
        if (x - y).abs() >= bounds.min_length {
            break (x.min(y), x.max(y));
        }
    };
    let (a1, b1) = coords();
    let (a2, b2) = coords();
    SegmentPairInvariants::new(alpha, d, a1, b1, a2, b2)
}

/// `x ↦ m x + t` with `m` orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub m: [[f64; 3]; 3],
    pub t: Vec3,
}

impl Isometry {
    pub fn apply(&self, p: Vec3) -> Vec3 {
        let r = |row: [f64; 3]| row[0] * p.x + row[1] * p.y + row[2] * p.z;
        Vec3::new(r(self.m[0]), r(self.m[1]), r(self.m[2])) + self.t
    }

    pub fn determinant(&self) -> f64 {
        let [r0, r1, r2] = self.m.map(Vec3::from);
        r0.cross(r1).dot(r2)
    }

    pub fn apply_segment(&self, s: &Segment) -> Segment {
        s.map(|p| self.apply(p))
    }
}

/// Uniform random rotation (unit quaternion from three uniforms).
pub fn random_rotation(rng: &mut impl Rng) -> [[f64; 3]; 3] {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random_range(0.0..2.0 * PI);
    let u3: f64 = rng.random_range(0.0..2.0 * PI);
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (w, x, y, z) = (a * u2.sin(), a * u2.cos(), b * u3.sin(), b * u3.cos());
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
        ],
        [
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
        ],
        [
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

/// Random rotation followed by a translation with coordinates in
/// `[-shift, shift]`.
pub fn random_rigid_motion(rng: &mut impl Rng, shift: f64) -> Isometry {
    Isometry {
        m: random_rotation(rng),
        t: random_point(rng, shift),
    }
}

/// Random orientation-reversing isometry: a rigid motion composed with a
/// reflection in a random plane through the origin.
pub fn random_reflection(rng: &mut impl Rng, shift: f64) -> Isometry {
    let mut iso = random_rigid_motion(rng, shift);
    let n = loop {
        let v = random_point(rng, 1.0);
        let len = v.norm();
        if len > 0.1 {
            break v * (1.0 / len);
        }
    };
    // (I - 2nnᵀ) m
    let cols: Vec<Vec3> = (0..3)
        .map(|j| Vec3::new(iso.m[0][j], iso.m[1][j], iso.m[2][j]))
        .map(|c| c - n * (2.0 * n.dot(c)))
        .collect();
    for (j, c) in cols.iter().enumerate() {
        iso.m[0][j] = c.x;
        iso.m[1][j] = c.y;
        iso.m[2][j] = c.z;
    }
    iso
}
