//! Boundary graphs of curve systems on surfaces.
//!
//! The vertices of a boundary graph are the connected components of the
//! surface cut along the curves, and every curve contributes one edge
//! between the components on its two sides. On a general triangulated
//! surface the curves are closed walks along mesh edges
//! ([`region_decomposition`], [`boundary_graph`]). On the round sphere the
//! curves may be arbitrary polylines, and the graph is computed from their
//! nesting structure ([`sphere_boundary_graph`]).

mod regions;
mod sphere;

use thiserror::Error;

use crate::mesh::MeshError;

pub use regions::{boundary_graph, region_decomposition, EdgeCycle, RegionDecomposition, SurfaceMesh};
pub use sphere::{
    arcs_cross, sphere_boundary_graph, sphere_boundary_graph_seeded, validate_loops, SphericalLoop, DEFAULT_SEED,
    REFERENCE_RETRIES,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArrangementError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("curve {curve} has {len} vertices; a closed simple walk needs at least 3")]
    CurveTooShort { curve: usize, len: usize },
    #[error("curve {curve} visits vertex {vertex} twice")]
    CurveNotSimple { curve: usize, vertex: usize },
    #[error("curve {curve}: vertex {vertex} is not a mesh vertex")]
    CurveVertexOutOfRange { curve: usize, vertex: usize },
    #[error("curve {curve}: ({a}, {b}) is not a mesh edge")]
    NotAMeshEdge { curve: usize, a: usize, b: usize },
    #[error("curve {curve}: edge ({a}, {b}) lies on the mesh boundary")]
    CurveOnBoundary { curve: usize, a: usize, b: usize },
    #[error("curves {first} and {second} share vertex {vertex}")]
    CurvesShareVertex { first: usize, second: usize, vertex: usize },
    #[error("loop {0} is degenerate (fewer than 3 distinct points)")]
    DegenerateLoop(usize),
    #[error("loop {index}: point {point} is not on the unit sphere (|p| = {norm})")]
    OffSphere { index: usize, point: usize, norm: f64 },
    #[error("loop {0} is not simple")]
    LoopNotSimple(usize),
    #[error("loops {0} and {1} intersect or come within tolerance")]
    LoopsIntersect(usize, usize),
    #[error("no usable reference point after {0} attempts")]
    ReferencePoint(usize),
    #[error("loop nesting is inconsistent (loops {0} and {1}); the loops likely intersect")]
    InconsistentNesting(usize, usize),
}
