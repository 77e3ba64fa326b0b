//! Self-intersection and proper-embeddedness checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AnalysisError, BallDomain};
use crate::geom::{Aabb, EPSILON};
use crate::mesh::{triangles_intersect, Bvh, TriMesh};

fn triangle_boxes(m: &TriMesh) -> Vec<Aabb> {
    (0..m.triangle_count())
        .map(|t| Aabb::from_points(&m.triangle_points(t)).inflate(EPSILON))
        .collect()
}

fn pairs_of<'a>(
    m: &'a TriMesh,
    bvh: &'a Bvh,
    boxes: &'a [Aabb],
    t: usize,
) -> impl Iterator<Item = (usize, usize)> + 'a {
    let tris = m.triangles();
    let pa = m.triangle_points(t);
    bvh.query(&boxes[t])
        .into_iter()
        .filter(move |&u| u > t && triangles_intersect(&tris[t], &pa, &tris[u], &m.triangle_points(u), EPSILON))
        .map(move |u| (t, u))
}

/// Every pair `(s, t)` with `s < t` of triangles that meet anywhere other
/// than in the vertices or edge they share, in increasing order.
pub fn intersecting_pairs(m: &TriMesh) -> Vec<(usize, usize)> {
    let boxes = triangle_boxes(m);
    let bvh = Bvh::build(&boxes);
    (0..m.triangle_count())
        .into_par_iter()
        .flat_map_iter(|t| pairs_of(m, &bvh, &boxes, t).collect::<Vec<_>>())
        .collect()
}

/// True iff two triangles of the mesh meet anywhere other than in the
/// vertices or edge they share.
pub fn self_intersects(m: &TriMesh) -> bool {
    let boxes = triangle_boxes(m);
    let bvh = Bvh::build(&boxes);
    (0..m.triangle_count())
        .into_par_iter()
        .any(|t| pairs_of(m, &bvh, &boxes, t).next().is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OffenseKind {
    NonManifoldEdge,
    NonManifoldVertex,
    SelfIntersection,
    /// A boundary vertex off the ball's sphere.
    BoundaryOffSphere,
    /// A non-boundary vertex on or outside the ball's sphere.
    InteriorNotInside,
    /// One vertex from each connected component.
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffendingItem {
    pub kind: OffenseKind,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    /// Largest `| |v| - R |` over boundary vertices.
    pub boundary_error: f64,
    /// Smallest `R - |v|` over non-boundary vertices (`R` if there are none).
    pub interior_clearance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub properly_embedded: bool,
    pub manifold: bool,
    pub self_intersecting: bool,
    pub connected: bool,
    pub orientable: bool,
    pub offending_items: Vec<OffendingItem>,
    pub margins: Margins,
}

impl ValidationReport {
    /// Fails with a summary of the offending items unless the mesh is
    /// properly embedded.
    pub fn require(&self) -> Result<(), AnalysisError> {
        if self.properly_embedded {
            return Ok(());
        }
        let kinds: Vec<String> = self
            .offending_items
            .iter()
            .map(|i| format!("{:?} x{}", i.kind, i.indices.len()))
            .collect();
        Err(AnalysisError::NotProperlyEmbedded(kinds.join(", ")))
    }
}

/// Checks that the mesh is a connected manifold surface without
/// self-intersections, whose boundary lies on the ball's sphere and whose
/// other vertices lie strictly inside. Failures are reported, not raised.
pub fn validate_properly_embedded(m: &TriMesh, ball: &BallDomain) -> ValidationReport {
    let mut items = Vec::new();
    let mut push = |kind, indices: Vec<usize>| {
        if !indices.is_empty() {
            items.push(OffendingItem { kind, indices });
        }
    };

    let bad_edges = m.non_manifold_edges();
    let bad_vertices = m.non_manifold_vertices();
    let manifold = bad_edges.is_empty() && bad_vertices.is_empty();
    push(
        OffenseKind::NonManifoldEdge,
        bad_edges.iter().flat_map(|&(a, b)| [a, b]).collect(),
    );
    push(OffenseKind::NonManifoldVertex, bad_vertices);

    let (component, count) = m.vertex_components();
    let connected = count == 1;
    if count > 1 {
        let mut firsts = vec![usize::MAX; count];
        for (v, &c) in component.iter().enumerate().rev() {
            firsts[c] = v;
        }
        push(OffenseKind::Disconnected, firsts);
    }

    let pairs = intersecting_pairs(m);
    let self_intersecting = !pairs.is_empty();
    push(
        OffenseKind::SelfIntersection,
        pairs.iter().flat_map(|&(a, b)| [a, b]).collect(),
    );

    let r = ball.radius();
    let on_boundary = if manifold {
        m.boundary_vertex_mask()
    } else {
        vec![false; m.vertex_count()]
    };
    let mut margins = Margins {
        boundary_error: 0.0,
        interior_clearance: f64::INFINITY,
    };
    let (mut off, mut outside) = (Vec::new(), Vec::new());
    for (v, p) in m.vertices().iter().enumerate() {
        let d = p.norm();
        if on_boundary[v] {
            margins.boundary_error = margins.boundary_error.max((d - r).abs());
            if (d - r).abs() > EPSILON {
                off.push(v);
            }
        } else {
            margins.interior_clearance = margins.interior_clearance.min(r - d);
            if r - d <= EPSILON {
                outside.push(v);
            }
        }
    }
    if margins.interior_clearance.is_infinite() {
        margins.interior_clearance = r;
    }
    let placed = off.is_empty() && outside.is_empty();
    push(OffenseKind::BoundaryOffSphere, off);
    push(OffenseKind::InteriorNotInside, outside);

    ValidationReport {
        properly_embedded: manifold && connected && !self_intersecting && placed,
        manifold,
        self_intersecting,
        connected,
        orientable: manifold && m.is_orientable(),
        offending_items: items,
        margins,
    }
}
