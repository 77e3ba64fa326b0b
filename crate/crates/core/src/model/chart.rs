//! Planar charts: constrained Delaunay triangulation of a polygonal domain
//! with holes, and the Steiner point sets that feed it.

use std::collections::{BTreeSet, HashMap};

use spade::handles::FixedVertexHandle;
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use crate::geom::Vec3;

pub(crate) type P2 = [f64; 2];

/// Even-odd point-in-polygon test.
pub(crate) fn point_in_polygon(p: P2, poly: &[P2]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

pub(crate) fn polygon_distance(p: P2, poly: &[P2]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let ab = [b[0] - a[0], b[1] - a[1]];
            let ap = [p[0] - a[0], p[1] - a[1]];
            let len2 = ab[0] * ab[0] + ab[1] * ab[1];
            let t = if len2 > 0.0 {
                ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let d = [ap[0] - t * ab[0], ap[1] - t * ab[1]];
            (d[0] * d[0] + d[1] * d[1]).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// A polygon whose vertices are global mesh vertices.
#[derive(Debug, Clone, Default)]
pub(crate) struct ChartPolygon {
    pub points: Vec<P2>,
    pub ids: Vec<usize>,
}

impl ChartPolygon {
    pub fn push(&mut self, p: P2, id: usize) {
        self.points.push(p);
        self.ids.push(id);
    }
}

/// Triangulates the region inside `outer` and outside every hole, using the
/// polygon vertices and the Steiner points. Every polygon edge ends up as a
/// boundary edge of the result, and no other edge does.
pub(crate) fn triangulate_domain(
    outer: &ChartPolygon,
    holes: &[ChartPolygon],
    steiner: &[(P2, usize)],
) -> Result<Vec<[usize; 3]>, String> {
    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> = ConstrainedDelaunayTriangulation::new();
    let mut ids: Vec<usize> = Vec::new();
    let mut insert = |cdt: &mut ConstrainedDelaunayTriangulation<Point2<f64>>, p: P2, id: usize| {
        let h = cdt
            .insert(Point2::new(p[0], p[1]))
            .map_err(|e| format!("chart point rejected: {e:?}"))?;
        let k = h.index();
        if k == ids.len() {
            ids.push(id);
        } else if ids[k] != id {
            return Err(format!("chart points of vertices {} and {id} coincide", ids[k]));
        }
        Ok::<FixedVertexHandle, String>(h)
    };

    let mut wanted: BTreeSet<(usize, usize)> = BTreeSet::new();
    for poly in std::iter::once(outer).chain(holes) {
        let handles = poly
            .points
            .iter()
            .zip(&poly.ids)
            .map(|(&p, &id)| insert(&mut cdt, p, id))
            .collect::<Result<Vec<_>, _>>()?;
        let n = handles.len();
        for i in 0..n {
            let (a, b) = (handles[i], handles[(i + 1) % n]);
            if cdt.try_add_constraint(a, b).is_empty() && !cdt.exists_constraint(a, b) {
                return Err("chart polygons intersect".into());
            }
            let (ia, ib) = (poly.ids[i], poly.ids[(i + 1) % n]);
            wanted.insert((ia.min(ib), ia.max(ib)));
        }
    }
    for &(p, id) in steiner {
        insert(&mut cdt, p, id)?;
    }

    let mut tris = Vec::new();
    for face in cdt.inner_faces() {
        let pos = face.positions();
        let c = [
            (pos[0].x + pos[1].x + pos[2].x) / 3.0,
            (pos[0].y + pos[1].y + pos[2].y) / 3.0,
        ];
        if !point_in_polygon(c, &outer.points) || holes.iter().any(|h| point_in_polygon(c, &h.points)) {
            continue;
        }
        let v = face.vertices();
        tris.push([
            ids[v[0].fix().index()],
            ids[v[1].fix().index()],
            ids[v[2].fix().index()],
        ]);
    }

    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for t in &tris {
        for i in 0..3 {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            *count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let boundary: BTreeSet<(usize, usize)> = count.into_iter().filter(|&(_, c)| c == 1).map(|(e, _)| e).collect();
    if boundary != wanted {
        return Err("chart triangulation does not respect its boundary polygons".into());
    }
    Ok(tris)
}

/// Steiner points collected in 3D with a per-point spacing. A candidate is
/// dropped when an accepted point lies closer than `0.6 * spacing`. With
/// `mirror` set, points are accepted in pairs related by `y -> -y`, so the
/// set stays symmetric; candidates near the mirror plane are snapped onto it.
pub(crate) struct SteinerSet {
    pub points: Vec<Vec3>,
    /// Every point that blocks candidates: the output plus reserved points.
    blocking: Vec<Vec3>,
    cell: f64,
    grid: HashMap<[i64; 3], Vec<usize>>,
    mirror: bool,
}

impl SteinerSet {
    pub fn new(cell: f64, mirror: bool) -> Self {
        SteinerSet {
            points: Vec::new(),
            blocking: Vec::new(),
            cell,
            grid: HashMap::new(),
            mirror,
        }
    }

    /// Blocks candidates near `p` without making it a Steiner point; used
    /// for constraint vertices.
    pub fn reserve(&mut self, p: Vec3) {
        self.block(p);
    }

    /// Adds `p` unconditionally and without its mirror image.
    pub fn push_fixed(&mut self, p: Vec3) {
        self.push(p);
    }

    fn key(&self, p: &Vec3) -> [i64; 3] {
        [
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
            (p.z / self.cell).floor() as i64,
        ]
    }

    fn crowded(&self, p: &Vec3, r: f64) -> bool {
        let k = self.key(p);
        let reach = (r / self.cell).ceil() as i64;
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                for dz in -reach..=reach {
                    if let Some(ids) = self.grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        if ids.iter().any(|&i| (self.blocking[i] - p).norm() < r) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn block(&mut self, p: Vec3) {
        let k = self.key(&p);
        self.grid.entry(k).or_default().push(self.blocking.len());
        self.blocking.push(p);
    }

    fn push(&mut self, p: Vec3) {
        self.block(p);
        self.points.push(p);
    }

    /// Offers a candidate. `accept` decides domain membership and `snap`
    /// moves a point onto the mirror plane while keeping it on the surface.
    pub fn offer(&mut self, p: Vec3, spacing: f64, accept: impl Fn(&Vec3) -> bool, snap: impl Fn(&Vec3) -> Vec3) {
        let r = 0.6 * spacing;
        if !self.mirror {
            if accept(&p) && !self.crowded(&p, r) {
                self.push(p);
            }
            return;
        }
        let p = if p.y < 0.0 { Vec3::new(p.x, -p.y, p.z) } else { p };
        if p.y < 0.3 * spacing {
            let q = snap(&p);
            if accept(&q) && !self.crowded(&q, r) {
                self.push(q);
            }
        } else if accept(&p) && !self.crowded(&p, r) {
            self.push(p);
            self.push(Vec3::new(p.x, -p.y, p.z));
        }
    }
}

/// `(cos, sin)` of `2 pi k / n`, with entries `k` and `n - k` exact mirror
/// images.
pub(crate) fn circle_table(n: usize) -> Vec<(f64, f64)> {
    let mut t = vec![(0.0, 0.0); n];
    for k in 0..=n / 2 {
        let a = std::f64::consts::TAU * k as f64 / n as f64;
        let (s, c) = a.sin_cos();
        t[k] = (c, if 2 * k == n { 0.0 } else { s });
        if k > 0 && k < n - k {
            t[n - k] = (c, -t[k].1);
        }
    }
    t[0] = (1.0, 0.0);
    t
}
