use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::geom::{Aabb, Vec3};

/// Undirected edge with the smaller vertex index first.
pub type EdgeKey = (usize, usize);

pub(crate) fn edge_key(a: usize, b: usize) -> EdgeKey {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("triangle {triangle} references vertex {index} which does not exist")]
    IndexOutOfRange { triangle: usize, index: usize },
    #[error("triangle {0} repeats a vertex")]
    DegenerateTriangle(usize),
    #[error("edge ({0}, {1}) is shared by more than two triangles")]
    NonManifoldEdge(usize, usize),
    #[error("vertex {0} is not a manifold vertex")]
    NonManifoldVertex(usize),
    #[error("mesh is not orientable")]
    NonOrientable,
    #[error("mesh has {0} connected components, expected 1")]
    Disconnected(usize),
    #[error("obj line {line}: {message}")]
    Obj { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

/// Indexed triangle mesh.
///
/// Construction only checks indices; manifoldness, orientability and the
/// boundary structure are queried on demand so that invalid meshes can still
/// be loaded and reported on.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&index) = tri.iter().find(|&&i| i >= vertices.len()) {
                return Err(MeshError::IndexOutOfRange { triangle: t, index });
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::DegenerateTriangle(t));
            }
        }
        Ok(TriMesh { vertices, triangles })
    }

    pub fn empty() -> Self {
        TriMesh {
            vertices: Vec::new(),
            triangles: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_aabb(&self, t: usize) -> Aabb {
        Aabb::from_points(&self.triangle_points(t))
    }

    pub fn aabb(&self) -> Aabb {
        Aabb::from_points(&self.vertices)
    }

    /// Unnormalized normal (twice the area vector) of triangle `t`.
    pub fn triangle_normal(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.triangle_points(t);
        (b - a).cross(&(c - a))
    }

    /// Appends `other`, returning the index offset applied to its vertices.
    pub fn append(&mut self, other: &TriMesh) -> usize {
        let offset = self.vertices.len();
        self.vertices.extend_from_slice(&other.vertices);
        self.triangles.extend(
            other
                .triangles
                .iter()
                .map(|t| [t[0] + offset, t[1] + offset, t[2] + offset]),
        );
        offset
    }

    pub fn map_vertices(&self, f: impl Fn(&Vec3) -> Vec3) -> TriMesh {
        TriMesh {
            vertices: self.vertices.iter().map(f).collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// Reverses the winding of every triangle.
    pub fn flipped(&self) -> TriMesh {
        TriMesh {
            vertices: self.vertices.clone(),
            triangles: self.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect(),
        }
    }

    /// Triangles incident to each undirected edge, in increasing order.
    pub fn edge_triangles(&self) -> BTreeMap<EdgeKey, Vec<usize>> {
        let mut map: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
        for (t, &[a, b, c]) in self.triangles.iter().enumerate() {
            for (u, v) in [(a, b), (b, c), (c, a)] {
                map.entry(edge_key(u, v)).or_default().push(t);
            }
        }
        map
    }

    pub fn edge_count(&self) -> usize {
        self.edge_triangles().len()
    }

    /// `V - E + F`, counting every stored vertex.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.triangles.len() as i64
    }

    pub fn check_edge_manifold(&self) -> Result<(), MeshError> {
        match self.edge_triangles().into_iter().find(|(_, ts)| ts.len() > 2) {
            Some(((a, b), _)) => Err(MeshError::NonManifoldEdge(a, b)),
            None => Ok(()),
        }
    }

    pub fn non_manifold_edges(&self) -> Vec<EdgeKey> {
        self.edge_triangles()
            .into_iter()
            .filter(|(_, ts)| ts.len() > 2)
            .map(|(e, _)| e)
            .collect()
    }

    /// Vertices whose incident triangles do not form a single fan, plus
    /// vertices used by no triangle at all.
    pub fn non_manifold_vertices(&self) -> Vec<usize> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                incident[v].push(t);
            }
        }
        let mut bad = Vec::new();
        for (v, tris) in incident.iter().enumerate() {
            if tris.is_empty() {
                bad.push(v);
                continue;
            }
            // Link edges opposite to v; the star is a fan iff the link graph
            // is connected.
            let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
            fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
                let p = *parent.entry(x).or_insert(x);
                if p == x {
                    return x;
                }
                let r = find(parent, p);
                parent.insert(x, r);
                r
            }
            for &t in tris {
                let others: Vec<usize> = self.triangles[t].iter().copied().filter(|&w| w != v).collect();
                let (ra, rb) = (find(&mut parent, others[0]), find(&mut parent, others[1]));
                if ra != rb {
                    parent.insert(ra, rb);
                }
            }
            let keys: Vec<usize> = parent.keys().copied().collect();
            let mut roots: Vec<usize> = keys.iter().map(|&k| find(&mut parent, k)).collect();
            roots.sort_unstable();
            roots.dedup();
            if roots.len() != 1 {
                bad.push(v);
            }
        }
        bad
    }

    pub fn boundary_edges(&self) -> Vec<EdgeKey> {
        self.edge_triangles()
            .into_iter()
            .filter(|(_, ts)| ts.len() == 1)
            .map(|(e, _)| e)
            .collect()
    }

    /// Flags for vertices incident to a boundary edge.
    pub fn boundary_vertex_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.vertices.len()];
        for (a, b) in self.boundary_edges() {
            mask[a] = true;
            mask[b] = true;
        }
        mask
    }

    /// Partitions the boundary edges into closed vertex cycles.
    ///
    /// Each loop starts at its smallest vertex and follows the winding of
    /// the triangle that owns its first edge. Loops are ordered by their
    /// starting vertex.
    pub fn boundary_loops(&self) -> Result<Vec<Vec<usize>>, MeshError> {
        let edges = self.edge_triangles();
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut forward: BTreeMap<EdgeKey, (usize, usize)> = BTreeMap::new();
        for (&(a, b), ts) in &edges {
            match ts.len() {
                1 => {
                    adj.entry(a).or_default().push(b);
                    adj.entry(b).or_default().push(a);
                    let tri = self.triangles[ts[0]];
                    let dir = (0..3)
                        .map(|i| (tri[i], tri[(i + 1) % 3]))
                        .find(|&(u, v)| edge_key(u, v) == (a, b))
                        .expect("edge belongs to its triangle");
                    forward.insert((a, b), dir);
                }
                2 => {}
                _ => return Err(MeshError::NonManifoldEdge(a, b)),
            }
        }
        if let Some((&v, _)) = adj.iter().find(|(_, n)| n.len() != 2) {
            return Err(MeshError::NonManifoldVertex(v));
        }

        let mut visited: BTreeMap<usize, bool> = adj.keys().map(|&v| (v, false)).collect();
        let mut loops = Vec::new();
        for &start in adj.keys() {
            if visited[&start] {
                continue;
            }
            let n = &adj[&start];
            let (u0, v0) = forward[&edge_key(start, n[0])];
            let mut next = if u0 == start { v0 } else { n[1] };
            let mut cycle = vec![start];
            visited.insert(start, true);
            let mut prev = start;
            while next != start {
                cycle.push(next);
                visited.insert(next, true);
                let nb = &adj[&next];
                let step = if nb[0] == prev { nb[1] } else { nb[0] };
                prev = next;
                next = step;
            }
            loops.push(cycle);
        }
        Ok(loops)
    }

    /// Connected components over vertices (isolated vertices count).
    pub fn component_count(&self) -> usize {
        self.vertex_components().1
    }

    /// Component id of every vertex, numbered by smallest member, and the
    /// component count.
    pub fn vertex_components(&self) -> (Vec<usize>, usize) {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &[a, b, c] in &self.triangles {
            for (u, v) in [(a, b), (b, c)] {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru.max(rv)] = ru.min(rv);
                }
            }
        }
        let mut ids = vec![usize::MAX; n];
        let mut count = 0;
        let comp = (0..n)
            .map(|v| {
                let r = find(&mut parent, v);
                if ids[r] == usize::MAX {
                    ids[r] = count;
                    count += 1;
                }
                ids[r]
            })
            .collect();
        (comp, count)
    }

    /// True iff every interior edge is traversed in opposite directions by
    /// its two triangles.
    pub fn is_consistently_oriented(&self) -> bool {
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &[a, b, c] in &self.triangles {
            for (u, v) in [(a, b), (b, c), (c, a)] {
                *directed.entry((u, v)).or_default() += 1;
            }
        }
        directed.values().all(|&c| c == 1)
    }

    /// Flips triangles so that every component is consistently oriented.
    /// The lowest-index triangle of each component keeps its winding.
    pub fn orient_consistently(&mut self) -> Result<(), MeshError> {
        self.check_edge_manifold()?;
        let edges = self.edge_triangles();
        let mut state: Vec<Option<bool>> = vec![None; self.triangles.len()];
        let has_directed = |tri: &[usize; 3], u: usize, v: usize| (0..3).any(|i| tri[i] == u && tri[(i + 1) % 3] == v);
        for seed in 0..self.triangles.len() {
            if state[seed].is_some() {
                continue;
            }
            state[seed] = Some(false);
            let mut queue = VecDeque::from([seed]);
            while let Some(t) = queue.pop_front() {
                let mut tri = self.triangles[t];
                if state[t] == Some(true) {
                    tri.swap(1, 2);
                }
                for i in 0..3 {
                    let (u, v) = (tri[i], tri[(i + 1) % 3]);
                    for &s in &edges[&edge_key(u, v)] {
                        if s == t {
                            continue;
                        }
                        let same_dir = has_directed(&self.triangles[s], u, v);
                        let want_flip = same_dir;
                        match state[s] {
                            None => {
                                state[s] = Some(want_flip);
                                queue.push_back(s);
                            }
                            Some(f) if f != want_flip => return Err(MeshError::NonOrientable),
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        for (t, s) in state.into_iter().enumerate() {
            if s == Some(true) {
                self.triangles[t].swap(1, 2);
            }
        }
        Ok(())
    }

    /// True iff the mesh admits a consistent orientation.
    pub fn is_orientable(&self) -> bool {
        self.clone().orient_consistently().is_ok()
    }

    /// Signed volume enclosed (meaningful for closed, oriented meshes).
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|&[a, b, c]| self.vertices[a].dot(&self.vertices[b].cross(&self.vertices[c])) / 6.0)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::primitives;

    #[test]
    fn disc_topology() {
        let disc = primitives::flat_disc(1.0, 4, 16);
        assert_eq!(disc.euler_characteristic(), 1);
        let loops = disc.boundary_loops().unwrap();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].len(), 16);
        assert_eq!(disc.component_count(), 1);
        assert!(disc.non_manifold_vertices().is_empty());
    }

    #[test]
    fn sphere_is_closed() {
        let s = primitives::uv_sphere(1.0, 8, 12);
        assert_eq!(s.euler_characteristic(), 2);
        assert!(s.boundary_loops().unwrap().is_empty());
        assert!(s.is_consistently_oriented());
        assert!(s.signed_volume() > 0.0);
    }

    #[test]
    fn orientation_repair() {
        let s = primitives::uv_sphere(1.0, 6, 8);
        let mut scrambled = s.clone();
        for t in (0..scrambled.triangles.len()).step_by(3) {
            scrambled.triangles[t].swap(0, 1);
        }
        assert!(!scrambled.is_consistently_oriented());
        scrambled.orient_consistently().unwrap();
        assert!(scrambled.is_consistently_oriented());
    }

    #[test]
    fn mobius_strip_is_not_orientable() {
        // Three-quad Möbius band on a 2 x 4 vertex strip with a twist.
        let n = 6;
        let mut verts = Vec::new();
        for i in 0..n {
            let a = i as f64 / n as f64 * std::f64::consts::TAU;
            let half = a / 2.0;
            for s in [-0.3, 0.3] {
                let r = 1.0 + s * half.cos();
                verts.push(Vec3::new(r * a.cos(), r * a.sin(), s * half.sin()));
            }
        }
        let mut tris = Vec::new();
        for i in 0..n {
            let (a0, a1) = (2 * i, 2 * i + 1);
            let (b0, b1) = if i + 1 < n {
                (2 * (i + 1), 2 * (i + 1) + 1)
            } else {
                (1, 0)
            };
            tris.push([a0, b0, a1]);
            tris.push([a1, b0, b1]);
        }
        let m = TriMesh::new(verts, tris).unwrap();
        assert!(!m.is_orientable());
        assert_eq!(m.boundary_loops().unwrap().len(), 1);
    }

    #[test]
    fn construction_checks_indices() {
        let v = vec![Vec3::zeros(); 3];
        assert_eq!(
            TriMesh::new(v.clone(), vec![[0, 1, 3]]),
            Err(MeshError::IndexOutOfRange { triangle: 0, index: 3 })
        );
        assert_eq!(TriMesh::new(v, vec![[0, 1, 1]]), Err(MeshError::DegenerateTriangle(0)));
    }

    #[test]
    fn bowtie_vertex_is_flagged() {
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(-1.0, -1.0, 0.0),
        ];
        let m = TriMesh::new(v, vec![[0, 1, 2], [0, 3, 4]]).unwrap();
        assert_eq!(m.non_manifold_vertices(), vec![0]);
        assert!(matches!(m.boundary_loops(), Err(MeshError::NonManifoldVertex(0))));
    }
}
