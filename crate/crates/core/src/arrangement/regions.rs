use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::ArrangementError;
use crate::mesh::{EdgeKey, TriMesh};
use crate::tree::Multigraph;

fn key(a: usize, b: usize) -> EdgeKey {
    (a.min(b), a.max(b))
}

/// A triangulated surface with precomputed edge adjacency. Every edge borders
/// one or two triangles.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    mesh: TriMesh,
    edges: BTreeMap<EdgeKey, Vec<usize>>,
}

impl SurfaceMesh {
    pub fn new(mesh: TriMesh) -> Result<Self, ArrangementError> {
        mesh.check_edge_manifold()?;
        let edges = mesh.edge_triangles();
        Ok(SurfaceMesh { mesh, edges })
    }

    pub fn mesh(&self) -> &TriMesh {
        &self.mesh
    }

    /// Triangles on either side of the edge `(a, b)`, if it is a mesh edge.
    pub fn edge_triangles(&self, a: usize, b: usize) -> Option<&[usize]> {
        self.edges.get(&key(a, b)).map(Vec::as_slice)
    }
}

/// Closed simple walk along mesh edges, given by its vertices in order; the
/// closing edge from the last vertex back to the first is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCycle(pub Vec<usize>);

impl EdgeCycle {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }
}

impl From<Vec<usize>> for EdgeCycle {
    fn from(v: Vec<usize>) -> Self {
        EdgeCycle(v)
    }
}

/// Connected components of the surface cut along a set of curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDecomposition {
    /// Region of every triangle. Regions are numbered in order of their
    /// smallest triangle index.
    pub region_of_triangle: Vec<usize>,
    pub region_count: usize,
    /// For each curve, the regions on its two sides (equal when the curve
    /// does not separate). The first entry is the side whose triangle
    /// traverses the curve's first edge in the curve's direction.
    pub curve_sides: Vec<(usize, usize)>,
}

fn validate_curves(s: &SurfaceMesh, curves: &[EdgeCycle]) -> Result<(), ArrangementError> {
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (ci, c) in curves.iter().enumerate() {
        let verts = c.vertices();
        if verts.len() < 3 {
            return Err(ArrangementError::CurveTooShort {
                curve: ci,
                len: verts.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for &v in verts {
            if v >= s.mesh.vertex_count() {
                return Err(ArrangementError::CurveVertexOutOfRange { curve: ci, vertex: v });
            }
            if !seen.insert(v) {
                return Err(ArrangementError::CurveNotSimple { curve: ci, vertex: v });
            }
            if let Some(&other) = owner.get(&v) {
                return Err(ArrangementError::CurvesShareVertex {
                    first: other,
                    second: ci,
                    vertex: v,
                });
            }
        }
        for &v in verts {
            owner.insert(v, ci);
        }
        for (a, b) in c.edges() {
            match s.edge_triangles(a, b) {
                None => return Err(ArrangementError::NotAMeshEdge { curve: ci, a, b }),
                Some(ts) if ts.len() < 2 => return Err(ArrangementError::CurveOnBoundary { curve: ci, a, b }),
                Some(_) => {}
            }
        }
    }
    Ok(())
}

/// Flood-fills triangles across every edge that no curve uses.
pub fn region_decomposition(s: &SurfaceMesh, curves: &[EdgeCycle]) -> Result<RegionDecomposition, ArrangementError> {
    validate_curves(s, curves)?;
    let blocked: BTreeSet<EdgeKey> = curves.iter().flat_map(|c| c.edges().map(|(a, b)| key(a, b))).collect();

    let tris = s.mesh.triangles();
    let mut region = vec![usize::MAX; tris.len()];
    let mut count = 0;
    for seed in 0..tris.len() {
        if region[seed] != usize::MAX {
            continue;
        }
        region[seed] = count;
        let mut queue = VecDeque::from([seed]);
        while let Some(t) = queue.pop_front() {
            let [a, b, c] = tris[t];
            for (u, v) in [(a, b), (b, c), (c, a)] {
                let e = key(u, v);
                if blocked.contains(&e) {
                    continue;
                }
                for &n in &s.edges[&e] {
                    if region[n] == usize::MAX {
                        region[n] = count;
                        queue.push_back(n);
                    }
                }
            }
        }
        count += 1;
    }

    let curve_sides = curves
        .iter()
        .map(|c| {
            let (a, b) = (c.vertices()[0], c.vertices()[1]);
            let ts = &s.edges[&key(a, b)];
            let forward = |t: usize| {
                let tri = tris[t];
                (0..3).any(|i| tri[i] == a && tri[(i + 1) % 3] == b)
            };
            let (first, second) = if forward(ts[1]) && !forward(ts[0]) {
                (ts[1], ts[0])
            } else {
                (ts[0], ts[1])
            };
            (region[first], region[second])
        })
        .collect();

    Ok(RegionDecomposition {
        region_of_triangle: region,
        region_count: count,
        curve_sides,
    })
}

/// One vertex per region of the cut surface and one edge per curve, joining
/// the regions on its two sides (a self-loop if the curve does not separate).
pub fn boundary_graph(s: &SurfaceMesh, curves: &[EdgeCycle]) -> Result<Multigraph, ArrangementError> {
    let rd = region_decomposition(s, curves)?;
    Ok(Multigraph::new(rd.region_count, rd.curve_sides).expect("regions index the vertex set"))
}
