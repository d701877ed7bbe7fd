//! Linking number between a probe segment and a finite lattice of translated
//! copies of a unit cell.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closed_form::lk_segments;
use crate::geom::{bbox_diagonal, segment_distance, Segment, Vec3};
use crate::summation::CompensatedSum;

/// Copies closer to the probe than this fraction of the probe/cell bounding
/// box diagonal count as touching it.
pub const CONTACT_REL: f64 = 1e-9;

/// Directions whose normalised wedge product falls below this are dependent.
pub const DEPENDENCE_EPS: f64 = 1e-12;

/// Translation step of the default lattices.
pub const DEFAULT_STEP: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeriodicError {
    #[error("expected 1 to 3 translation directions, got {0}")]
    DirectionCount(usize),
    #[error("translation directions are linearly dependent")]
    DependentDirections,
    #[error("unit cell is empty")]
    EmptyCell,
    #[error("probe segment is degenerate")]
    DegenerateProbe,
    #[error("non-finite coordinate in lattice spec")]
    NonFinite,
    #[error("probe touches lattice copy {index} (distance {distance:e})")]
    Contact { index: usize, distance: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub probe: Segment,
    pub cell: Vec<Segment>,
    pub directions: Vec<Vec3>,
    /// Copies run over `-n..=n` in every direction.
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub partial_lk: f64,
    /// Contribution of the shell of copies added at this `n`.
    pub delta: f64,
}

impl LatticeSpec {
    pub fn validate(&self) -> Result<(), PeriodicError> {
        let k = self.directions.len();
        if !(1..=3).contains(&k) {
            return Err(PeriodicError::DirectionCount(k));
        }
        if self.cell.is_empty() {
            return Err(PeriodicError::EmptyCell);
        }
        let finite = self.probe.a.is_finite()
            && self.probe.b.is_finite()
            && self.cell.iter().all(|s| s.a.is_finite() && s.b.is_finite())
            && self.directions.iter().all(|v| v.is_finite());
        if !finite {
            return Err(PeriodicError::NonFinite);
        }
        if self.probe.is_degenerate() {
            return Err(PeriodicError::DegenerateProbe);
        }
        if !independent(&self.directions) {
            return Err(PeriodicError::DependentDirections);
        }
        Ok(())
    }

    /// Number of segments in the generated lattice: `|cell| · (2n+1)^k`.
    pub fn segment_count(&self) -> usize {
        self.cell.len() * (2 * self.n + 1).pow(self.directions.len() as u32)
    }

    fn contact_threshold(&self) -> f64 {
        let pts = std::iter::once(self.probe)
            .chain(self.cell.iter().copied())
            .flat_map(|s| [s.a, s.b]);
        CONTACT_REL * bbox_diagonal(pts)
    }
}

fn independent(dirs: &[Vec3]) -> bool {
    let norms: Vec<f64> = dirs.iter().map(|v| v.norm()).collect();
    if norms.contains(&0.0) {
        return false;
    }
    let wedge = match dirs {
        [_] => return true,
        [u, v] => u.cross(*v).norm(),
        [u, v, w] => u.cross(*v).dot(*w).abs(),
        _ => return false,
    };
    wedge > DEPENDENCE_EPS * norms.iter().product::<f64>()
}

/// Integer offsets with every coordinate in `-n..=n`, in lexicographic
/// order; unused trailing coordinates stay zero.
fn offsets(k: usize, n: usize) -> impl Iterator<Item = [i64; 3]> {
    let n = n as i64;
    let mut next = Some([-n; 3]);
    if let Some(first) = next.as_mut() {
        for c in first.iter_mut().skip(k) {
            *c = 0;
        }
    }
    std::iter::from_fn(move || {
        let current = next?;
        let mut succ = current;
        next = None;
        for i in (0..k).rev() {
            if succ[i] < n {
                succ[i] += 1;
                next = Some(succ);
                break;
            }
            succ[i] = -n;
        }
        Some(current)
    })
}

fn shift(dirs: &[Vec3], offset: &[i64; 3]) -> Vec3 {
    dirs.iter()
        .zip(offset)
        .fold(Vec3::ZERO, |acc, (&v, &c)| acc + v * c as f64)
}

/// Every cell segment translated by every offset `c1 v1 + … + ck vk`,
/// `|ci| <= n`. Offsets vary slowest, cell order fastest.
pub fn generate_lattice(spec: &LatticeSpec) -> Result<Vec<Segment>, PeriodicError> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.segment_count());
    for off in offsets(spec.directions.len(), spec.n) {
        let t = shift(&spec.directions, &off);
        out.extend(spec.cell.iter().map(|s| s.translated(t)));
    }
    Ok(out)
}

fn checked_lk(
    spec: &LatticeSpec,
    threshold: f64,
    index: usize,
    seg: &Segment,
) -> Result<f64, PeriodicError> {
    let distance = segment_distance(&spec.probe, seg);
    if distance <= threshold {
        return Err(PeriodicError::Contact { index, distance });
    }
    Ok(lk_segments(&spec.probe, seg).value)
}

/// Compensated sum of `lk(probe, copy)` over the generated lattice.
pub fn periodic_lk(spec: &LatticeSpec) -> Result<f64, PeriodicError> {
    let threshold = spec.contact_threshold();
    let mut acc = CompensatedSum::new();
    for (i, seg) in generate_lattice(spec)?.iter().enumerate() {
        acc.add(checked_lk(spec, threshold, i, seg)?);
    }
    Ok(acc.value())
}

/// Partial sums for `n = 0..=n_max`, each row adding the shell of offsets
/// with `max |ci| = n`. The `n` of `spec` is ignored.
pub fn convergence_scan(
    spec: &LatticeSpec,
    n_max: usize,
) -> Result<Vec<ConvergenceRow>, PeriodicError> {
    spec.validate()?;
    let threshold = spec.contact_threshold();
    let k = spec.directions.len();
    let mut total = CompensatedSum::new();
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut index = 0;
    for n in 0..=n_max {
        let mut shell = CompensatedSum::new();
        for off in offsets(k, n) {
            if off
                .iter()
                .map(|c| c.unsigned_abs() as usize)
                .max()
                .unwrap_or(0)
                != n
            {
                continue;
            }
            let t = shift(&spec.directions, &off);
            for s in &spec.cell {
                shell.add(checked_lk(spec, threshold, index, &s.translated(t))?);
                index += 1;
            }
        }
        let delta = shell.value();
        total.add(delta);
        rows.push(ConvergenceRow {
            n,
            partial_lk: total.value(),
            delta,
        });
    }
    Ok(rows)
}

/// The probe `(0,0,-1) → (0,0,1)`.
pub fn default_probe() -> Segment {
    Segment::new(Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 0.0, 1.0))
}

/// Two oppositely oriented segments parallel to `y`, on either side of the
/// probe: `(1,-1,0) → (1,1,0)` and `(-1,1,0) → (-1,-1,0)`.
pub fn default_cell() -> Vec<Segment> {
    vec![
        Segment::new(Vec3::new(1.0, -1.0, 0.0), Vec3::new(1.0, 1.0, 0.0)),
        Segment::new(Vec3::new(-1.0, 1.0, 0.0), Vec3::new(-1.0, -1.0, 0.0)),
    ]
}

/// Default lattice with `k` directions taken from `x, z, y` in that order,
/// each of length [`DEFAULT_STEP`].
pub fn default_lattice(k: usize, n: usize) -> Result<LatticeSpec, PeriodicError> {
    if !(1..=3).contains(&k) {
        return Err(PeriodicError::DirectionCount(k));
    }
    let dirs = [Vec3::X, Vec3::Z, Vec3::Y];
    Ok(LatticeSpec {
        probe: default_probe(),
        cell: default_cell(),
        directions: dirs[..k].iter().map(|&v| v * DEFAULT_STEP).collect(),
        n,
    })
}
