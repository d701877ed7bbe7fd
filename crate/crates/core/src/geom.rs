//! 3D vectors, oriented segments and two-component polygonal links.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative length below which an edge is treated as a point and dropped.
pub const DEGENERATE_EDGE_REL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("component {component} has {count} vertices, at least 2 are required")]
    TooFewVertices { component: usize, count: usize },
    #[error("non-finite coordinate in component {component}, vertex {vertex}")]
    NonFinite { component: usize, vertex: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Vec3::new(x, y, z)
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

#[inline]
pub fn dot(u: Vec3, v: Vec3) -> f64 {
    u.dot(v)
}

#[inline]
pub fn cross(u: Vec3, v: Vec3) -> Vec3 {
    u.cross(v)
}

/// Triple product `(u × v) · w`, the signed volume of the box spanned by the three vectors.
#[inline]
pub fn triple(u: Vec3, v: Vec3, w: Vec3) -> f64 {
    u.cross(v).dot(w)
}

/// Oriented straight segment from `a` (initial endpoint) to `b` (final endpoint).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Vec3,
    pub b: Vec3,
}

impl Segment {
    pub const fn new(a: Vec3, b: Vec3) -> Self {
        Self { a, b }
    }

    /// Direction vector `b - a`.
    #[inline]
    pub fn direction(&self) -> Vec3 {
        self.b - self.a
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.direction().norm()
    }

    pub fn is_degenerate(&self) -> bool {
        self.length() == 0.0
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.b, self.a)
    }

    pub fn translated(&self, t: Vec3) -> Segment {
        Segment::new(self.a + t, self.b + t)
    }

    /// Applies `f` to both endpoints.
    pub fn map(&self, f: impl Fn(Vec3) -> Vec3) -> Segment {
        Segment::new(f(self.a), f(self.b))
    }

    pub fn point_at(&self, t: f64) -> Vec3 {
        self.a + self.direction() * t
    }

    pub fn midpoint(&self) -> Vec3 {
        self.point_at(0.5)
    }
}

/// Minimum Euclidean distance between two closed segments.
///
/// Closest-point computation on the parameter square `[0,1]²`, handling
/// degenerate and parallel inputs.
pub fn segment_distance(s1: &Segment, s2: &Segment) -> f64 {
    let d1 = s1.direction();
    let d2 = s2.direction();
    let r = s1.a - s2.a;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(r);

    let (s, t) = if a == 0.0 && e == 0.0 {
        (0.0, 0.0)
    } else if a == 0.0 {
        (0.0, (f / e).clamp(0.0, 1.0))
    } else {
        let c = d1.dot(r);
        if e == 0.0 {
            ((-c / a).clamp(0.0, 1.0), 0.0)
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s = if denom > f64::EPSILON * a * e {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
            (s, t)
        }
    };
    (s1.point_at(s) - s2.point_at(t)).norm()
}

/// Two polygonal components, each open or closed, given by ordered vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyLink {
    pub comp1: Vec<Vec3>,
    pub closed1: bool,
    pub comp2: Vec<Vec3>,
    pub closed2: bool,
}

impl PolyLink {
    pub fn new(comp1: Vec<Vec3>, closed1: bool, comp2: Vec<Vec3>, closed2: bool) -> Self {
        Self {
            comp1,
            closed1,
            comp2,
            closed2,
        }
    }

    /// Convenience constructor for two closed components.
    pub fn closed(comp1: Vec<Vec3>, comp2: Vec<Vec3>) -> Self {
        Self::new(comp1, true, comp2, true)
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        for (idx, comp) in [&self.comp1, &self.comp2].into_iter().enumerate() {
            if comp.len() < 2 {
                return Err(GeomError::TooFewVertices {
                    component: idx + 1,
                    count: comp.len(),
                });
            }
            if let Some(v) = comp.iter().position(|p| !p.is_finite()) {
                return Err(GeomError::NonFinite {
                    component: idx + 1,
                    vertex: v,
                });
            }
        }
        Ok(())
    }

    /// Diagonal of the axis-aligned box around all vertices.
    pub fn bbox_diagonal(&self) -> f64 {
        bbox_diagonal(self.comp1.iter().chain(self.comp2.iter()).copied())
    }

    pub fn map(&self, f: impl Fn(Vec3) -> Vec3) -> PolyLink {
        PolyLink {
            comp1: self.comp1.iter().map(|&p| f(p)).collect(),
            closed1: self.closed1,
            comp2: self.comp2.iter().map(|&p| f(p)).collect(),
            closed2: self.closed2,
        }
    }

    pub fn swapped(&self) -> PolyLink {
        PolyLink::new(
            self.comp2.clone(),
            self.closed2,
            self.comp1.clone(),
            self.closed1,
        )
    }
}

pub fn bbox_diagonal(points: impl IntoIterator<Item = Vec3>) -> f64 {
    let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut hi = -lo;
    let mut any = false;
    for p in points {
        any = true;
        lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
        hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
    }
    if any {
        (hi - lo).norm()
    } else {
        0.0
    }
}

/// Oriented edges of one component, following vertex order, with the
/// wrap-around edge when `closed`. Edges shorter than `min_len` are dropped.
pub fn component_edges(vertices: &[Vec3], closed: bool, min_len: f64) -> Vec<Segment> {
    let n = vertices.len();
    if n < 2 {
        return Vec::new();
    }
    let count = if closed { n } else { n - 1 };
    (0..count)
        .map(|i| Segment::new(vertices[i], vertices[(i + 1) % n]))
        .filter(|s| s.length() > min_len)
        .collect()
}

/// Edge lists of both components. Zero-length edges (below
/// [`DEGENERATE_EDGE_REL`] times the bounding-box diagonal) are filtered out.
pub fn edges(link: &PolyLink) -> Result<(Vec<Segment>, Vec<Segment>), GeomError> {
    link.validate()?;
    let min_len = DEGENERATE_EDGE_REL * link.bbox_diagonal();
    Ok((
        component_edges(&link.comp1, link.closed1, min_len),
        component_edges(&link.comp2, link.closed2, min_len),
    ))
}

/// Number of raw edges implied by vertex count and closure, before filtering.
pub fn raw_edge_count(vertices: &[Vec3], closed: bool) -> usize {
    match (vertices.len(), closed) {
        (0 | 1, _) => 0,
        (n, true) => n,
        (n, false) => n - 1,
    }
}
