//! Gauss linking numbers of straight line segments in closed form, with
//! numerical oracles, polygonal links and periodic lattice sums.

pub mod closed_form;
pub mod geom;
pub mod invariants;
pub mod io;
pub mod link;
pub mod periodic;
pub mod quadrature;
pub mod sampling;
pub mod summation;

pub use closed_form::{
    at_term, lk_from_invariants, lk_segments, lk_simple_orthogonal, LkBranch, LkResult,
};
pub use geom::{PolyLink, Segment, Vec3};
pub use invariants::{extract_invariants, reconstruct_segments, SegmentPairInvariants};
pub use link::{builtin_links, lk_link, LinkReport};
pub use periodic::{convergence_scan, generate_lattice, periodic_lk, ConvergenceRow, LatticeSpec};
pub use quadrature::QuadratureConfig;
