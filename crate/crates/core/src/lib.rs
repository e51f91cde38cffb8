//! Exact shadows of polygonal curves and voxel sets.
//!
//! The crate computes axis-parallel projections ("shadows") of simple
//! polygonal curves with rational vertices, turns them into planar
//! 1-complexes and classifies their topology. On top of that sit the strand
//! calculus of extreme-to-extreme subpaths, lattice search harnesses for
//! shadow-classification questions, a voxelized suspension-sphere
//! construction with cubical homology and explicit retractions, and
//! reconstruction of the largest set compatible with three shadows.

pub mod arrangement;
pub mod compat;
pub mod curve;
pub mod geom;
pub mod rational;
pub mod render;
pub mod sphere;
pub mod strands;
pub mod theorem_lab;

pub use arrangement::{
    build_complex, classify, is_convex_cycle, Classification, OneComplex, TopologyReport,
};
pub use curve::{parse_curve, project, CurveError, Point, PolyChain, SegmentSet};
pub use rational::Rational;

/// Six-vertex open chain in R^3 whose three shadows are cycles.
pub const SIX_VERTEX_EXAMPLE: &str = "open\n1 0 1\n0 0 0\n1 1 0\n0 3 0\n2 0 2\n1 0 0\n";

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Arrangement(#[from] arrangement::ArrangementError),
    #[error(transparent)]
    Strand(#[from] strands::StrandError),
    #[error(transparent)]
    Search(#[from] theorem_lab::SearchError),
    #[error(transparent)]
    Sphere(#[from] sphere::SphereError),
    #[error(transparent)]
    Compat(#[from] compat::CompatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
