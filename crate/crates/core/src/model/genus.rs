//! Handle attachment: raises the genus of a mesh by `g` inside a small ball.
//!
//! The triangles inside the ball must form a disc that is a height graph
//! over its tangent plane. That disc is retriangulated with two holes per
//! handle, and each pair of holes is joined by a staple-shaped tube: two
//! vertical stubs and a horizontal chord, meeting at mitred corners.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector, Matrix3};
use serde::{Deserialize, Serialize};

use super::build::Builder;
use super::chart::{circle_table, point_in_polygon, polygon_distance, triangulate_domain, ChartPolygon, P2};
use super::ModelError;
use crate::geom::{point_triangle_distance_sq, vec3_serde, Vec3, EPSILON};
use crate::mesh::TriMesh;

/// Ring resolution of the handle tubes when the caller does not choose one.
pub const DEFAULT_HANDLE_SEGMENTS: usize = 24;

/// Ball in which handles are attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenusSite {
    #[serde(with = "vec3_serde")]
    pub center: Vec3,
    pub radius: f64,
}

fn site_error(msg: impl Into<String>) -> ModelError {
    ModelError::GenusSite(msg.into())
}

#[derive(Debug, Clone, Copy)]
enum SurfaceFit {
    Plane { point: Vec3, normal: Vec3 },
    Sphere { center: Vec3, radius: f64 },
    Free,
}

/// Exact plane or sphere through the points (within `EPSILON`), if any.
fn fit_surface(pts: &[Vec3]) -> SurfaceFit {
    let n = pts.len() as f64;
    let centroid = pts.iter().sum::<Vec3>() / n;
    let mut cov = Matrix3::zeros();
    for p in pts {
        let d = p - centroid;
        cov += d * d.transpose();
    }
    let eig = cov.symmetric_eigen();
    let (imin, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("3x3");
    let normal: Vec3 = eig.eigenvectors.column(imin).into_owned().normalize();
    if pts.iter().all(|p| (p - centroid).dot(&normal).abs() <= EPSILON) {
        return SurfaceFit::Plane {
            point: centroid,
            normal,
        };
    }
    if pts.len() < 4 {
        return SurfaceFit::Free;
    }
    // |p - c|^2 = r^2 rewritten as the linear system 2 p.c + k = |p|^2,
    // solved about the centroid for conditioning.
    let a = DMatrix::from_fn(pts.len(), 4, |i, j| {
        let d = pts[i] - centroid;
        if j < 3 {
            2.0 * d[j]
        } else {
            1.0
        }
    });
    let rhs = DVector::from_fn(pts.len(), |i, _| (pts[i] - centroid).norm_squared());
    let Ok(sol) = a.svd(true, true).solve(&rhs, 1e-14) else {
        return SurfaceFit::Free;
    };
    let c = Vec3::new(sol[0], sol[1], sol[2]);
    let r2 = sol[3] + c.norm_squared();
    if r2 <= 0.0 {
        return SurfaceFit::Free;
    }
    let center = c + centroid;
    let radius = r2.sqrt();
    if pts.iter().all(|p| ((p - center).norm() - radius).abs() <= EPSILON) {
        SurfaceFit::Sphere { center, radius }
    } else {
        SurfaceFit::Free
    }
}

struct Chart {
    origin: Vec3,
    e1: Vec3,
    e2: Vec3,
    n: Vec3,
}

impl Chart {
    fn to2(&self, p: &Vec3) -> P2 {
        let d = p - self.origin;
        [d.dot(&self.e1), d.dot(&self.e2)]
    }

    fn height(&self, p: &Vec3) -> f64 {
        (p - self.origin).dot(&self.n)
    }

    fn at(&self, x: f64, y: f64, z: f64) -> Vec3 {
        self.origin + self.e1 * x + self.e2 * y + self.n * z
    }
}

/// Adds `g` handles inside `site` with [`DEFAULT_HANDLE_SEGMENTS`] segments
/// per tube ring. See [`attach_genus_with`].
pub fn attach_genus(m: &TriMesh, g: usize, site: &GenusSite) -> Result<TriMesh, ModelError> {
    attach_genus_with(m, g, site, DEFAULT_HANDLE_SEGMENTS)
}

/// Adds `g` handles inside `site`, leaving every triangle outside the ball
/// untouched. The triangles with all three vertices in the ball must form a
/// disc that projects injectively to its tangent plane, and the rest of the
/// mesh must stay clear of the handles. Genus grows by `g`; boundary loops
/// are unchanged. When the disc lies on a plane or sphere, new vertices are
/// placed on it exactly; otherwise they are interpolated linearly.
pub fn attach_genus_with(m: &TriMesh, g: usize, site: &GenusSite, segments: usize) -> Result<TriMesh, ModelError> {
    if g == 0 {
        return Ok(m.clone());
    }
    if segments < 8 {
        return Err(site_error("handle tubes need at least 8 segments"));
    }
    let mut mesh = m.clone();
    if !mesh.is_consistently_oriented() {
        mesh.orient_consistently()?;
    }
    let verts = mesh.vertices();
    let tris = mesh.triangles();
    let inside: Vec<bool> = verts.iter().map(|v| (v - site.center).norm() < site.radius).collect();
    let in_patch: Vec<bool> = tris.iter().map(|t| t.iter().all(|&v| inside[v])).collect();
    let patch: Vec<usize> = (0..tris.len()).filter(|&t| in_patch[t]).collect();
    if patch.is_empty() {
        return Err(site_error("the site ball contains no triangle"));
    }

    let ids: Vec<usize> = patch
        .iter()
        .flat_map(|&t| tris[t])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let local = |v: usize| ids.binary_search(&v).expect("patch vertex");
    let sub = TriMesh::new(
        ids.iter().map(|&v| verts[v]).collect(),
        patch.iter().map(|&t| tris[t].map(local)).collect(),
    )?;
    if sub.component_count() != 1 || sub.euler_characteristic() != 1 {
        return Err(site_error("the patch inside the site ball is not a disc"));
    }
    let loops = sub.boundary_loops()?;
    if loops.len() != 1 {
        return Err(site_error("the patch inside the site ball is not a disc"));
    }
    let boundary: Vec<usize> = loops[0].iter().map(|&i| ids[i]).collect();
    let on_boundary: BTreeSet<usize> = boundary.iter().copied().collect();

    // Tangent chart.
    let area_normal: Vec3 = patch
        .iter()
        .map(|&t| {
            let [a, b, c] = mesh.triangle_points(t);
            (b - a).cross(&(c - a))
        })
        .sum();
    if area_normal.norm() == 0.0 {
        return Err(site_error("the patch has no well-defined normal"));
    }
    let fit = fit_surface(sub.vertices());
    let (mut n, origin) = match fit {
        SurfaceFit::Plane { point, normal } => {
            let n = if normal.dot(&area_normal) < 0.0 {
                -normal
            } else {
                normal
            };
            (n, site.center - n * (site.center - point).dot(&n))
        }
        SurfaceFit::Sphere { center, radius } => {
            let radial = (site.center - center)
                .try_normalize(1e-12)
                .unwrap_or(area_normal.normalize());
            let n = if radial.dot(&area_normal) < 0.0 {
                -radial
            } else {
                radial
            };
            (n, center + radial * radius)
        }
        SurfaceFit::Free => (area_normal.normalize(), site.center),
    };
    // Keep mirror-symmetric input symmetric under y -> -y.
    if n.y.abs() < 1e-12 {
        n.y = 0.0;
        n = n.normalize();
    }
    let ey = Vec3::y();
    let e2 = (ey - n * ey.dot(&n))
        .try_normalize(1e-6)
        .unwrap_or_else(|| (Vec3::x() - n * n.x).normalize());
    let chart = Chart {
        origin,
        e1: e2.cross(&n),
        e2,
        n,
    };
    for &t in &patch {
        let [a, b, c] = mesh.triangle_points(t).map(|p| chart.to2(&p));
        let area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        if area <= 0.0 {
            return Err(site_error("the patch is not a graph over its tangent plane"));
        }
    }
    let lift = |x: f64, y: f64| -> Option<Vec3> {
        match fit {
            SurfaceFit::Plane { .. } => Some(chart.at(x, y, 0.0)),
            SurfaceFit::Sphere { center, radius } => {
                let q = chart.at(x, y, 0.0) - center;
                let b = q.dot(&chart.n);
                let disc = b * b - q.norm_squared() + radius * radius;
                if disc < 0.0 {
                    return None;
                }
                let (z1, z2) = (-b + disc.sqrt(), -b - disc.sqrt());
                Some(chart.at(x, y, if z1.abs() <= z2.abs() { z1 } else { z2 }))
            }
            SurfaceFit::Free => patch.iter().find_map(|&t| {
                let [a, b, c] = mesh.triangle_points(t);
                let [pa, pb, pc] = [a, b, c].map(|p| chart.to2(&p));
                let det = (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0]);
                let l1 = ((x - pa[0]) * (pc[1] - pa[1]) - (y - pa[1]) * (pc[0] - pa[0])) / det;
                let l2 = ((pb[0] - pa[0]) * (y - pa[1]) - (pb[1] - pa[1]) * (x - pa[0])) / det;
                let l0 = 1.0 - l1 - l2;
                (l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12).then(|| {
                    let z = l0 * chart.height(&a) + l1 * chart.height(&b) + l2 * chart.height(&c);
                    chart.at(x, y, z)
                })
            }),
        }
    };

    let outer_pts: Vec<P2> = boundary.iter().map(|&v| chart.to2(&verts[v])).collect();
    if !point_in_polygon([0.0, 0.0], &outer_pts) {
        return Err(site_error("the site center does not project into the patch"));
    }
    let r_poly = polygon_distance([0.0, 0.0], &outer_pts);
    let width = 1.6 * r_poly / g as f64;
    let rho = width / 12.0;
    let table = circle_table(segments);
    let q = 1.0 + std::f64::consts::TAU / segments as f64;
    let mean_edge = {
        let edges = sub.edge_triangles();
        edges
            .keys()
            .map(|&(a, b)| (sub.vertices()[a] - sub.vertices()[b]).norm())
            .sum::<f64>()
            / edges.len() as f64
    };

    let mut b = Builder {
        vertices: verts.to_vec(),
        triangles: (0..tris.len()).filter(|&t| !in_patch[t]).map(|t| tris[t]).collect(),
    };
    let lifted = |x: f64, y: f64| lift(x, y).ok_or_else(|| site_error("cannot place a handle foot on the patch"));

    // Feet: (center x, sign of the ring's x direction, ring ids).
    let mut feet: Vec<(f64, f64, Vec<usize>)> = Vec::new();
    for s in 0..g {
        let c = -0.8 * r_poly + (s as f64 + 0.5) * width;
        for (x0, sign) in [(c - width / 4.0, 1.0), (c + width / 4.0, -1.0)] {
            let ring = table
                .iter()
                .map(|&(cs, sn)| lifted(x0 + sign * rho * cs, rho * sn).map(|p| b.add(p)))
                .collect::<Result<Vec<_>, _>>()?;
            feet.push((x0, sign, ring));
        }
    }

    // Graded rings around each foot, then the surviving old interior
    // vertices, as Steiner points.
    let mut steiner: Vec<(P2, usize)> = Vec::new();
    let mut exclusion = 1.5 * rho;
    for &(x0, _, _) in &feet {
        let mut m = 1;
        loop {
            let r = rho * q.powi(m);
            let spacing = std::f64::consts::TAU * r / segments as f64;
            if r > 0.225 * width || spacing > mean_edge {
                break;
            }
            for k in 0..segments {
                let t = std::f64::consts::TAU * (k as f64 + 0.5 * (m % 2) as f64) / segments as f64;
                let p = [x0 + r * t.cos(), r * t.sin()];
                if point_in_polygon(p, &outer_pts) && polygon_distance(p, &outer_pts) > 0.5 * spacing {
                    steiner.push((p, b.add(lifted(p[0], p[1])?)));
                }
            }
            exclusion = exclusion.max(r + 0.5 * spacing);
            m += 1;
        }
    }
    for &v in &ids {
        if on_boundary.contains(&v) {
            continue;
        }
        let p = chart.to2(&verts[v]);
        if feet.iter().all(|&(x0, _, _)| (p[0] - x0).hypot(p[1]) >= exclusion) {
            steiner.push((p, v));
        }
    }

    let mut outer = ChartPolygon::default();
    for (&v, &p) in boundary.iter().zip(&outer_pts) {
        outer.push(p, v);
    }
    let holes: Vec<ChartPolygon> = feet
        .iter()
        .map(|(_, _, ring)| {
            let mut poly = ChartPolygon::default();
            for &v in ring {
                poly.push(chart.to2(&b.vertices[v]), v);
            }
            poly
        })
        .collect();
    let patch_tris = triangulate_domain(&outer, &holes, &steiner).map_err(ModelError::Triangulation)?;
    b.triangles.extend(patch_tris);

    // Tubes. Every ring is parametrized by the same angle table, so ring k
    // of one piece continues ring k of the next.
    let top = ids
        .iter()
        .map(|&v| chart.height(&verts[v]))
        .chain(b.vertices[verts.len()..].iter().map(|p| chart.height(p)))
        .fold(f64::NEG_INFINITY, f64::max);
    let h = top + 3.0 * rho;
    let mut extent: f64 = 0.0;
    for s in 0..g {
        let (xa, _, ref bottom_a) = feet[2 * s];
        let (xb, _, ref bottom_b) = feet[2 * s + 1];
        let (bottom_a, bottom_b) = (bottom_a.clone(), bottom_b.clone());
        let corner = |x0: f64, sign: f64| -> Vec<Vec3> {
            table
                .iter()
                .map(|&(cs, sn)| chart.at(x0 + sign * rho * cs, rho * sn, h - rho * cs))
                .collect()
        };
        let ma = corner(xa, 1.0);
        let mb = corner(xb, -1.0);
        extent = ma
            .iter()
            .chain(&mb)
            .map(|p| (p - site.center).norm())
            .fold(extent, f64::max);
        let ma = b.add_all(&ma);
        let mb = b.add_all(&mb);
        b.straight_tube(&bottom_a, &ma, rho);
        b.straight_tube(&ma, &mb, rho);
        b.straight_tube(&mb, &bottom_b, rho);
    }
    let extent = b.vertices[verts.len()..]
        .iter()
        .map(|p| (p - site.center).norm())
        .fold(extent, f64::max);
    for t in (0..tris.len()).filter(|&t| !in_patch[t]) {
        let [p0, p1, p2] = mesh.triangle_points(t);
        if point_triangle_distance_sq(&site.center, &p0, &p1, &p2).sqrt() <= extent + 0.25 * rho {
            return Err(site_error(format!(
                "triangle {t} outside the patch comes within reach of the handles"
            )));
        }
    }

    // Drop the retriangulated interior vertices that were not reused.
    let mut used = vec![false; b.vertices.len()];
    for t in &b.triangles {
        for &v in t {
            used[v] = true;
        }
    }
    let mut remap = vec![usize::MAX; used.len()];
    let mut vertices = Vec::new();
    for (i, &u) in used.iter().enumerate() {
        if u {
            remap[i] = vertices.len();
            vertices.push(b.vertices[i]);
        }
    }
    let triangles = b.triangles.iter().map(|t| t.map(|v| remap[v])).collect();
    let mut out = TriMesh::new(vertices, triangles)?;
    out.orient_consistently()?;
    if out.euler_characteristic() != mesh.euler_characteristic() - 2 * g as i64 {
        return Err(ModelError::Triangulation(
            "handle attachment changed the topology unexpectedly".into(),
        ));
    }
    Ok(out)
}
