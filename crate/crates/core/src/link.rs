//! Linking number of two-component polygonal links as a sum over edge pairs.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::closed_form::{lk_from_invariants, projections_cross, LkBranch};
use crate::geom::{edges, raw_edge_count, segment_distance, GeomError, PolyLink, Segment, Vec3};
use crate::invariants::extract_invariants;
use crate::summation::CompensatedSum;

/// Components closer than this fraction of the bounding-box diagonal are
/// treated as intersecting.
pub const CONTACT_REL: f64 = 1e-9;

/// Pairs with `|d|` below this fraction of the bounding-box diagonal whose
/// projections cross are reported: their value sits next to a jump of ±1/2.
pub const NEAR_COPLANAR_REL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("component {0} has no edges of positive length")]
    EmptyComponent(usize),
    #[error("components intersect: edge {edge1} and edge {edge2} are {distance:e} apart")]
    Intersecting {
        edge1: usize,
        edge2: usize,
        distance: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinkWarning {
    NearCoplanarCrossing { edge1: usize, edge2: usize, d: f64 },
    FilteredDegenerateEdges { component: usize, count: usize },
}

impl fmt::Display for LinkWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkWarning::NearCoplanarCrossing { edge1, edge2, d } => write!(
                f,
                "edges {edge1} and {edge2} are nearly coplanar (d = {d:e}) with crossing projections"
            ),
            LinkWarning::FilteredDegenerateEdges { component, count } => {
                write!(f, "component {component}: dropped {count} zero-length edge(s)")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkReport {
    pub lk_total: f64,
    pub pair_count: usize,
    /// Pairs evaluated by each closed-form branch; every branch has an entry.
    pub branch_histogram: BTreeMap<LkBranch, usize>,
    pub warnings: Vec<LinkWarning>,
}

/// Smallest distance between an edge of `e1` and an edge of `e2`, with the
/// indices of the closest pair.
pub fn min_edge_distance(e1: &[Segment], e2: &[Segment]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for (i, s1) in e1.iter().enumerate() {
        for (j, s2) in e2.iter().enumerate() {
            let dist = segment_distance(s1, s2);
            if best.is_none_or(|(_, _, b)| dist < b) {
                best = Some((i, j, dist));
            }
        }
    }
    best
}

/// Sum of closed-form linking numbers over all edge pairs, in
/// lexicographic order of `(edge1, edge2)`.
pub fn lk_link(link: &PolyLink) -> Result<LinkReport, LinkError> {
    let (e1, e2) = edges(link)?;
    if e1.is_empty() {
        return Err(LinkError::EmptyComponent(1));
    }
    if e2.is_empty() {
        return Err(LinkError::EmptyComponent(2));
    }
    let scale = link.bbox_diagonal();
    if let Some((edge1, edge2, distance)) = min_edge_distance(&e1, &e2) {
        if distance <= CONTACT_REL * scale {
            return Err(LinkError::Intersecting {
                edge1,
                edge2,
                distance,
            });
        }
    }

    let mut warnings = Vec::new();
    for (component, (verts, closed, kept)) in [
        (&link.comp1, link.closed1, e1.len()),
        (&link.comp2, link.closed2, e2.len()),
    ]
    .into_iter()
    .enumerate()
    {
        let dropped = raw_edge_count(verts, closed) - kept;
        if dropped > 0 {
            warnings.push(LinkWarning::FilteredDegenerateEdges {
                component: component + 1,
                count: dropped,
            });
        }
    }

    let mut histogram: BTreeMap<LkBranch, usize> = LkBranch::ALL.iter().map(|&b| (b, 0)).collect();
    let mut total = CompensatedSum::new();
    for (i, s1) in e1.iter().enumerate() {
        for (j, s2) in e2.iter().enumerate() {
            let inv = extract_invariants(s1, s2);
            let r = lk_from_invariants(&inv);
            *histogram.entry(r.branch).or_default() += 1;
            if inv.d.abs() <= NEAR_COPLANAR_REL * scale && projections_cross(&inv) {
                warnings.push(LinkWarning::NearCoplanarCrossing {
                    edge1: i,
                    edge2: j,
                    d: inv.d,
                });
            }
            total.add(r.value);
        }
    }

    Ok(LinkReport {
        lk_total: total.value(),
        pair_count: e1.len() * e2.len(),
        branch_histogram: histogram,
        warnings,
    })
}

fn pts(coords: &[[f64; 3]]) -> Vec<Vec3> {
    coords.iter().map(|&c| Vec3::from(c)).collect()
}

/// The four example links: `hopf_square` (lk −1), `hopf_triangle` (+1),
/// `solomon` (+2) and `whitehead` (0), all with closed components.
pub fn builtin_links() -> BTreeMap<&'static str, PolyLink> {
    let square_ring = pts(&[[-1., -2., 0.], [-1., 2., 0.], [1., 2., 0.], [1., -2., 0.]]);
    let mut out = BTreeMap::new();
    out.insert(
        "hopf_square",
        PolyLink::closed(
            pts(&[[0., 0., 2.], [4., 0., 2.], [4., 0., -2.], [0., 0., -2.]]),
            square_ring.clone(),
        ),
    );
    out.insert(
        "hopf_triangle",
        PolyLink::closed(
            pts(&[[-1., 0., -1.], [-1., 0., 1.], [1., 0., 0.]]),
            pts(&[[0., 0., 0.], [2., 1., 0.], [2., -1., 0.]]),
        ),
    );
    out.insert(
        "solomon",
        PolyLink::closed(
            pts(&[
                [0., -1., 1.],
                [0., -1., -1.],
                [3., -1., -1.],
                [3., 0., 1.],
                [0., 1., 1.],
                [0., 1., -1.],
                [3., 1., -1.],
                [4., 0., 1.],
            ]),
            square_ring,
        ),
    );
    out.insert(
        "whitehead",
        PolyLink::closed(
            pts(&[
                [-3., -2., -1.],
                [0., -2., -1.],
                [0., 2., 1.],
                [0., 0., 1.],
                [0., 0., 0.],
                [3., 0., 0.],
                [3., 1., 0.],
                [-3., 1., 0.],
                [-3., 1., -1.],
            ]),
            pts(&[
                [-1., 0.5, -3.],
                [-1., 0.5, 3.],
                [1., 0.5, 3.],
                [1., 0.5, -3.],
            ]),
        ),
    );
    out
}

/// Expected linking numbers of [`builtin_links`].
pub fn builtin_expected(name: &str) -> Option<f64> {
    match name {
        "hopf_square" => Some(-1.0),
        "hopf_triangle" => Some(1.0),
        "solomon" => Some(2.0),
        "whitehead" => Some(0.0),
        _ => None,
    }
}
