//! Numerical oracles for the linking number of two segments.
//!
//! Three independent routes, all computed by adaptive Gauss–Legendre
//! quadrature with no use of the closed form:
//!
//! * [`gauss_lk_segments`]: the Gauss double integral over the two segment
//!   parameters, evaluated directly from the endpoints.
//! * [`reduced_double_integral`]: the double integral in the rescaled line
//!   coordinates `p = u1/d`, `q = u2/d` of the canonical frame,
//!   `-1/4π ∫∫ sinα / (1 + p² + q² - 2pq cosα)^{3/2} dp dq`.
//! * [`lk_single_integral`]: the inner integral done analytically, leaving
//!   `lk = (I(a2/d) - I(b2/d)) / 4π` with `I` from [`single_integral_i`].
//!
//! [`antiderivative_check`] compares the integrand of `I` against a central
//! difference of its arctangent antiderivative.
//!
//! Panels use a `base_order`-point rule with a `2·base_order`-point rule on
//! the same panel as the error estimate. The panel with the largest error is
//! split (halves in 1D, quarters in 2D) until the summed error estimate falls
//! below `max(abs_tol, rel_tol·|value|)`. Final panel values are accumulated in
//! a fixed geometric order with compensated summation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use thiserror::Error;

use crate::geom::{bbox_diagonal, segment_distance, Segment};
use crate::invariants::{SegmentPairInvariants, PARALLEL_EPS};
use crate::summation::CompensatedSum;

/// Segments closer than this fraction of their bounding-box diagonal are
/// refused: the Gauss integrand is too close to singular.
pub const NEAR_CONTACT_REL: f64 = 1e-9;

/// Hard cap on panels processed by one adaptive run.
const MAX_PANELS: usize = 400_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("degenerate (zero-length) segment")]
    Degenerate,
    #[error("segments nearly touch: distance {distance:e} below threshold {threshold:e}")]
    NearContact { distance: f64, threshold: f64 },
    #[error("parallel segments")]
    Parallel,
    #[error("signed distance d is zero")]
    ZeroDistance,
    #[error("angle {0} must lie strictly inside (0, pi)")]
    AngleOutOfRange(f64),
    #[error("non-finite input")]
    NonFinite,
    #[error("quadrature did not converge: value {value:e}, error estimate {error:e}")]
    NotConverged { value: f64, error: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    /// Nodes per panel per axis of the low-order rule; the error estimate
    /// uses twice as many.
    pub base_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 20,
            base_order: 8,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(QuadError::InvalidConfig("rel_tol must be positive"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(QuadError::InvalidConfig("abs_tol must be positive"));
        }
        if self.max_depth < 1 {
            return Err(QuadError::InvalidConfig("max_depth must be at least 1"));
        }
        if self.base_order < 2 {
            return Err(QuadError::InvalidConfig("base_order must be at least 2"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre polynomial `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Fixed-rule integral of `f` over `[a, b]`.
    pub fn integrate(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = CompensatedSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(mid + half * x));
        }
        half * acc.value()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn rule_pair(base: usize) -> (GaussLegendre, GaussLegendre) {
    static DEFAULT: OnceLock<(GaussLegendre, GaussLegendre)> = OnceLock::new();
    if base == 8 {
        DEFAULT
            .get_or_init(|| (GaussLegendre::new(8), GaussLegendre::new(16)))
            .clone()
    } else {
        (GaussLegendre::new(base), GaussLegendre::new(2 * base))
    }
}

/// Value and error estimate of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: [f64; 2],
    hi: [f64; 2],
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo[0].total_cmp(&self.lo[0]))
            .then_with(|| other.lo[1].total_cmp(&self.lo[1]))
    }
}

/// Panel rule: `(lo, hi) -> (value, error estimate)`.
type PanelRule<'a> = dyn Fn(&[f64; 2], &[f64; 2]) -> (f64, f64) + 'a;

/// Global adaptive driver shared by the 1D and 2D integrators. `dims` is 1
/// or 2; for 1D the second coordinate is ignored.
fn adaptive(
    dims: usize,
    eval: &PanelRule,
    lo: [f64; 2],
    hi: [f64; 2],
    initial: [usize; 2],
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadError> {
    cfg.validate()?;
    if !(lo.iter().chain(hi.iter()).all(|v| v.is_finite())) {
        return Err(QuadError::NonFinite);
    }
    let make = |lo: [f64; 2], hi: [f64; 2], depth: u32| {
        let (low, high) = eval(&lo, &hi);
        Panel {
            lo,
            hi,
            value: high,
            error: (high - low).abs(),
            depth,
        }
    };

    let mut heap = BinaryHeap::new();
    let ny = if dims == 2 { initial[1].max(1) } else { 1 };
    let nx = initial[0].max(1);
    for i in 0..nx {
        for j in 0..ny {
            let x0 = lo[0] + (hi[0] - lo[0]) * i as f64 / nx as f64;
            let x1 = lo[0] + (hi[0] - lo[0]) * (i + 1) as f64 / nx as f64;
            let (y0, y1) = if dims == 2 {
                (
                    lo[1] + (hi[1] - lo[1]) * j as f64 / ny as f64,
                    lo[1] + (hi[1] - lo[1]) * (j + 1) as f64 / ny as f64,
                )
            } else {
                (0.0, 0.0)
            };
            heap.push(make([x0, y0], [x1, y1], 0));
        }
    }

    let mut done: Vec<Panel> = Vec::new();
    let mut processed = heap.len();
    let totals = |heap: &BinaryHeap<Panel>, done: &[Panel]| {
        let mut v = CompensatedSum::new();
        let mut e = 0.0;
        for p in heap.iter().chain(done.iter()) {
            v.add(p.value);
            e += p.error;
        }
        (v.value(), e)
    };
    let (mut value, mut error) = totals(&heap, &done);
    let mut converged = error <= cfg.target(value);

    while !converged {
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= cfg.max_depth || processed >= MAX_PANELS {
            done.push(worst);
            if heap.is_empty() {
                break;
            }
            continue;
        }
        value -= worst.value;
        error -= worst.error;
        let mx = 0.5 * (worst.lo[0] + worst.hi[0]);
        let children: Vec<Panel> = if dims == 2 {
            let my = 0.5 * (worst.lo[1] + worst.hi[1]);
            vec![
                make(worst.lo, [mx, my], worst.depth + 1),
                make([mx, worst.lo[1]], [worst.hi[0], my], worst.depth + 1),
                make([worst.lo[0], my], [mx, worst.hi[1]], worst.depth + 1),
                make([mx, my], worst.hi, worst.depth + 1),
            ]
        } else {
            vec![
                make(worst.lo, [mx, 0.0], worst.depth + 1),
                make([mx, 0.0], worst.hi, worst.depth + 1),
            ]
        };
        processed += children.len();
        for c in children {
            value += c.value;
            error += c.error;
            heap.push(c);
        }
        // running totals drift; refresh them periodically
        if processed % 4096 < 4 {
            (value, error) = totals(&heap, &done);
        }
        converged = error <= cfg.target(value);
    }

    done.extend(heap);
    done.sort_by(|a, b| {
        a.lo[0]
            .total_cmp(&b.lo[0])
            .then_with(|| a.lo[1].total_cmp(&b.lo[1]))
    });
    let mut acc = CompensatedSum::new();
    let mut err = 0.0;
    for p in &done {
        acc.add(p.value);
        err += p.error;
    }
    let est = Estimate {
        value: acc.value(),
        error: err,
        panels: done.len(),
    };
    if !est.value.is_finite() {
        return Err(QuadError::NonFinite);
    }
    if est.error > cfg.target(est.value) {
        return Err(QuadError::NotConverged {
            value: est.value,
            error: est.error,
        });
    }
    Ok(est)
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate_1d(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    initial: usize,
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadError> {
    let (low, high) = rule_pair(cfg.base_order);
    let eval = |lo: &[f64; 2], hi: &[f64; 2]| {
        (
            low.integrate(&f, lo[0], hi[0]),
            high.integrate(&f, lo[0], hi[0]),
        )
    };
    adaptive(1, &eval, [a, 0.0], [b, 0.0], [initial, 1], cfg)
}

fn tensor(rule: &GaussLegendre, f: &impl Fn(f64, f64) -> f64, lo: &[f64; 2], hi: &[f64; 2]) -> f64 {
    let hx = 0.5 * (hi[0] - lo[0]);
    let mx = 0.5 * (hi[0] + lo[0]);
    let hy = 0.5 * (hi[1] - lo[1]);
    let my = 0.5 * (hi[1] + lo[1]);
    let mut acc = CompensatedSum::new();
    for (xi, wi) in rule.nodes.iter().zip(&rule.weights) {
        let x = mx + hx * xi;
        for (yj, wj) in rule.nodes.iter().zip(&rule.weights) {
            acc.add(wi * wj * f(x, my + hy * yj));
        }
    }
    hx * hy * acc.value()
}

/// Adaptive integral of `f` over the rectangle `[x0, x1] × [y0, y1]`.
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    x: (f64, f64),
    y: (f64, f64),
    initial: [usize; 2],
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadError> {
    let (low, high) = rule_pair(cfg.base_order);
    let eval = |lo: &[f64; 2], hi: &[f64; 2]| (tensor(&low, &f, lo, hi), tensor(&high, &f, lo, hi));
    adaptive(2, &eval, [x.0, y.0], [x.1, y.1], initial, cfg)
}

/// Initial panels per axis so that a feature of width `feature` spans at
/// least a couple of panels of a domain of width `extent`.
fn initial_panels(extent: f64, feature: f64) -> usize {
    let ratio = extent.abs() / feature.max(f64::MIN_POSITIVE);
    (0.5 * ratio).ceil().clamp(2.0, 32.0) as usize
}

/// Gauss integral of the linking number of two segments, evaluated directly
/// from their endpoints.
pub fn gauss_lk_segments(
    s1: &Segment,
    s2: &Segment,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadError> {
    cfg.validate()?;
    if ![s1.a, s1.b, s2.a, s2.b].iter().all(|p| p.is_finite()) {
        return Err(QuadError::NonFinite);
    }
    if s1.is_degenerate() || s2.is_degenerate() {
        return Err(QuadError::Degenerate);
    }
    let scale = bbox_diagonal([s1.a, s1.b, s2.a, s2.b]);
    let distance = segment_distance(s1, s2);
    let threshold = NEAR_CONTACT_REL * scale;
    if distance <= threshold {
        return Err(QuadError::NearContact {
            distance,
            threshold,
        });
    }

    let d1 = s1.direction();
    let d2 = s2.direction();
    let normal = d1.cross(d2);
    let inv4pi = 1.0 / (4.0 * PI);
    let integrand = |t: f64, s: f64| {
        let r = s1.point_at(t) - s2.point_at(s);
        let r2 = r.norm_squared();
        normal.dot(r) / (r2 * r2.sqrt()) * inv4pi
    };
    let init = [
        initial_panels(s1.length(), distance),
        initial_panels(s2.length(), distance),
    ];
    Ok(integrate_2d(integrand, (0.0, 1.0), (0.0, 1.0), init, cfg)?.value)
}

fn check_reduced_inputs(inv: &SegmentPairInvariants) -> Result<(), QuadError> {
    if inv.is_degenerate() {
        return Err(QuadError::Degenerate);
    }
    if inv.flags.parallel {
        return Err(QuadError::Parallel);
    }
    if !inv.fields().iter().all(|v| v.is_finite()) {
        return Err(QuadError::NonFinite);
    }
    if !(inv.alpha > 0.0 && inv.alpha < PI) || inv.alpha.sin() <= PARALLEL_EPS {
        return Err(QuadError::AngleOutOfRange(inv.alpha));
    }
    if inv.d == 0.0 {
        return Err(QuadError::ZeroDistance);
    }
    Ok(())
}

/// Linking number from the double integral in rescaled line coordinates.
///
/// The integral itself is stated for `d > 0`; for `d < 0` the value at `|d|`
/// is negated, since the central symmetry `v ↦ -v` flips `d` and the linking
/// number while fixing every other invariant.
pub fn reduced_double_integral(
    inv: &SegmentPairInvariants,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadError> {
    cfg.validate()?;
    check_reduced_inputs(inv)?;
    let dd = inv.d.abs();
    let sign = inv.d.signum();
    let (sin_a, cos_a) = inv.alpha.sin_cos();
    let p = (inv.a1 / dd, inv.b1 / dd);
    let q = (inv.a2 / dd, inv.b2 / dd);
    if p.0 == p.1 || q.0 == q.1 {
        return Ok(0.0);
    }
    let integrand = |p: f64, q: f64| {
        let base = 1.0 + p * p + q * q - 2.0 * p * q * cos_a;
        sin_a / (base * base.sqrt())
    };
    // the integrand has unit width across the diagonal and ~1/sinα along it
    let init = [
        initial_panels(p.1 - p.0, sin_a),
        initial_panels(q.1 - q.0, sin_a),
    ];
    let est = integrate_2d(integrand, p, q, init, &scaled_for_lk(cfg))?;
    Ok(-sign * est.value / (4.0 * PI))
}

/// The integral is divided by 4π afterwards, so scale the absolute tolerance
/// up to keep the requested accuracy on the linking number.
fn scaled_for_lk(cfg: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: cfg.abs_tol * 4.0 * PI,
        ..*cfg
    }
}

/// Integrand of the single-integral form at `(p, r)`:
/// `sinα (r - p cosα) / ((1 + p² sin²α) sqrt(1 + p² + r² - 2pr cosα))`.
pub fn single_integrand(p: f64, r: f64, alpha: f64) -> f64 {
    let (sin_a, cos_a) = alpha.sin_cos();
    let root = (1.0 + p * p + r * r - 2.0 * p * r * cos_a).sqrt();
    sin_a * (r - p * cos_a) / ((1.0 + p * p * sin_a * sin_a) * root)
}

/// Antiderivative in `p` of [`single_integrand`]:
/// `atan((p r sinα + cotα) / sqrt(1 + p² + r² - 2pr cosα))`.
pub fn single_antiderivative(p: f64, r: f64, alpha: f64) -> f64 {
    let (sin_a, cos_a) = alpha.sin_cos();
    let root = (1.0 + p * p + r * r - 2.0 * p * r * cos_a).sqrt();
    ((p * r * sin_a + cos_a / sin_a) / root).atan()
}

/// `I(r)`: adaptive integral of [`single_integrand`] over
/// `p ∈ [a1/|d|, b1/|d|]`.
pub fn single_integral_i(
    r: f64,
    inv: &SegmentPairInvariants,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadError> {
    cfg.validate()?;
    check_reduced_inputs(inv)?;
    if !r.is_finite() {
        return Err(QuadError::NonFinite);
    }
    let dd = inv.d.abs();
    let (p0, p1) = (inv.a1 / dd, inv.b1 / dd);
    if p0 == p1 {
        return Ok(0.0);
    }
    let alpha = inv.alpha;
    let init = initial_panels(p1 - p0, alpha.sin());
    Ok(integrate_1d(
        |p| single_integrand(p, r, alpha),
        p0,
        p1,
        init,
        &scaled_for_lk(cfg),
    )?
    .value)
}

/// Linking number reconstructed as `sign(d) (I(a2/|d|) - I(b2/|d|)) / 4π`.
pub fn lk_single_integral(
    inv: &SegmentPairInvariants,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadError> {
    check_reduced_inputs(inv)?;
    let dd = inv.d.abs();
    let lo = single_integral_i(inv.a2 / dd, inv, cfg)?;
    let hi = single_integral_i(inv.b2 / dd, inv, cfg)?;
    Ok(inv.d.signum() * (lo - hi) / (4.0 * PI))
}

/// Returns `(analytic, numeric)`: the single-integral integrand at `(p, r)`
/// and the central difference with step `h` of its arctangent antiderivative.
pub fn antiderivative_check(p: f64, r: f64, alpha: f64, h: f64) -> (f64, f64) {
    let analytic = single_integrand(p, r, alpha);
    let numeric = (single_antiderivative(p + h, r, alpha) - single_antiderivative(p - h, r, alpha))
        / (2.0 * h);
    (analytic, numeric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [2usize, 5, 8, 16] {
            let rule = GaussLegendre::new(n);
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            // exact up to degree 2n - 1
            let deg = 2 * n - 1;
            let f = |x: f64| x.powi(deg as i32 - 1);
            let exact = if (deg - 1) % 2 == 0 {
                2.0 / deg as f64
            } else {
                0.0
            };
            assert!(
                (rule.integrate(&f, -1.0, 1.0) - exact).abs() < 1e-13,
                "n={n}"
            );
        }
    }

    #[test]
    fn gauss_legendre_nodes_are_sorted_and_symmetric() {
        let rule = GaussLegendre::new(7);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        for i in 0..7 {
            assert!((rule.nodes[i] + rule.nodes[6 - i]).abs() < 1e-15);
        }
        assert_eq!(rule.nodes[3], 0.0);
    }

    #[test]
    fn adaptive_1d_handles_a_peak() {
        let cfg = QuadratureConfig::default();
        let eps = 1e-3;
        let est = integrate_1d(|x| eps / (x * x + eps * eps), -1.0, 1.0, 2, &cfg).unwrap();
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((est.value - exact).abs() < 1e-9);
    }

    #[test]
    fn adaptive_2d_gaussian() {
        let cfg = QuadratureConfig::default();
        let est = integrate_2d(
            |x, y| (-(x * x + y * y)).exp(),
            (-6.0, 6.0),
            (-6.0, 6.0),
            [2, 2],
            &cfg,
        )
        .unwrap();
        assert!((est.value - PI).abs() < 1e-10);
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(QuadError::InvalidConfig(_))));
        let bad = QuadratureConfig {
            base_order: 1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig {
            max_depth: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn gauss_unit_orthogonal_pair() {
        let s1 = Segment::new(Vec3::new(0., 0., -0.5), Vec3::new(1., 0., -0.5));
        let s2 = Segment::new(Vec3::new(0., 0., 0.5), Vec3::new(0., 1., 0.5));
        let v = gauss_lk_segments(&s1, &s2, &QuadratureConfig::default()).unwrap();
        assert!((v + 1.0 / 24.0).abs() < 1e-10);
    }

    #[test]
    fn gauss_coplanar_pair_is_zero() {
        let s1 = Segment::new(Vec3::new(0., 0., 0.), Vec3::new(1., 0.3, 0.));
        let s2 = Segment::new(Vec3::new(0., 2., 0.), Vec3::new(1., 1.5, 0.));
        let cfg = QuadratureConfig::default();
        assert!(gauss_lk_segments(&s1, &s2, &cfg).unwrap().abs() <= cfg.abs_tol);
    }

    #[test]
    fn gauss_refuses_contact_and_degenerate() {
        let cfg = QuadratureConfig::default();
        let s1 = Segment::new(Vec3::new(-1., 0., 0.), Vec3::new(1., 0., 0.));
        let s2 = Segment::new(Vec3::new(0., -1., 0.), Vec3::new(0., 1., 0.));
        assert!(matches!(
            gauss_lk_segments(&s1, &s2, &cfg),
            Err(QuadError::NearContact { .. })
        ));
        let p = Segment::new(Vec3::Z, Vec3::Z);
        assert_eq!(gauss_lk_segments(&s1, &p, &cfg), Err(QuadError::Degenerate));
    }

    #[test]
    fn reduced_forms_on_unit_orthogonal_pair() {
        let cfg = QuadratureConfig::default();
        let inv = SegmentPairInvariants::new(FRAC_PI_2, 1.0, 0.0, 1.0, 0.0, 1.0);
        let v2 = reduced_double_integral(&inv, &cfg).unwrap();
        assert!((v2 + 1.0 / 24.0).abs() < 1e-10);
        let v1 = lk_single_integral(&inv, &cfg).unwrap();
        assert!((v1 + 1.0 / 24.0).abs() < 1e-10);
    }

    #[test]
    fn collapsed_ranges_give_zero() {
        let cfg = QuadratureConfig::default();
        let inv = SegmentPairInvariants::new(1.0, 0.7, 0.4, 0.4, -1.0, 2.0);
        assert_eq!(reduced_double_integral(&inv, &cfg).unwrap(), 0.0);
        let inv = SegmentPairInvariants::new(1.0, 0.7, -1.0, 2.0, 0.4, 0.4);
        assert_eq!(reduced_double_integral(&inv, &cfg).unwrap(), 0.0);
        assert_eq!(lk_single_integral(&inv, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn reduced_forms_reject_zero_distance() {
        let cfg = QuadratureConfig::default();
        let inv = SegmentPairInvariants::new(1.0, 0.0, -1.0, 1.0, -1.0, 1.0);
        assert_eq!(
            reduced_double_integral(&inv, &cfg),
            Err(QuadError::ZeroDistance)
        );
        assert_eq!(lk_single_integral(&inv, &cfg), Err(QuadError::ZeroDistance));
    }

    #[test]
    fn antiderivative_matches_integrand() {
        let (a, n) = antiderivative_check(0.5, 1.0, FRAC_PI_2, 1e-5);
        assert!((a - n).abs() < 1e-8);
        let (a, n) = antiderivative_check(0.0, 0.0, FRAC_PI_3, 1e-5);
        assert_eq!(a, 0.0);
        assert!(n.abs() < 1e-10);
    }
}
