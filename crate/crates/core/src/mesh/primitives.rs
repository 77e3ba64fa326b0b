//! Structured meshes of standard surfaces. Every builder returns a
//! consistently oriented mesh; closed surfaces have outward normals.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use super::TriMesh;
use crate::geom::Vec3;

fn finish(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> TriMesh {
    let mut m = TriMesh::new(vertices, triangles).expect("primitive indices are valid");
    m.orient_consistently().expect("primitives are orientable");
    m
}

fn orient_outward(m: TriMesh) -> TriMesh {
    if m.signed_volume() < 0.0 {
        m.flipped()
    } else {
        m
    }
}

/// Latitude/longitude sphere about the origin with poles on the z-axis.
///
/// Vertex 0 is the north pole, latitude ring `k` (1-based, `k < lat`) holds
/// vertices `1 + (k-1)*lon .. 1 + k*lon`, and the last vertex is the south
/// pole. With even `lat`, ring `lat/2` is the equator.
pub fn uv_sphere(radius: f64, lat: usize, lon: usize) -> TriMesh {
    assert!(lat >= 2 && lon >= 3);
    let mut v = vec![Vec3::new(0.0, 0.0, radius)];
    for k in 1..lat {
        let theta = PI * k as f64 / lat as f64;
        for j in 0..lon {
            let phi = TAU * j as f64 / lon as f64;
            v.push(radius * Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()));
        }
    }
    v.push(Vec3::new(0.0, 0.0, -radius));
    let south = v.len() - 1;
    let ring = |k: usize, j: usize| 1 + (k - 1) * lon + j % lon;
    let mut t = Vec::new();
    for j in 0..lon {
        t.push([0, ring(1, j), ring(1, j + 1)]);
        t.push([south, ring(lat - 1, j + 1), ring(lat - 1, j)]);
    }
    for k in 1..lat - 1 {
        for j in 0..lon {
            t.push([ring(k, j), ring(k + 1, j), ring(k + 1, j + 1)]);
            t.push([ring(k, j), ring(k + 1, j + 1), ring(k, j + 1)]);
        }
    }
    orient_outward(finish(v, t))
}

/// Vertex indices of latitude ring `k` of [`uv_sphere`], in longitude order.
pub fn uv_sphere_ring(lon: usize, k: usize) -> Vec<usize> {
    (0..lon).map(|j| 1 + (k - 1) * lon + j).collect()
}

/// Icosahedron subdivided `subdivisions` times and projected to the sphere.
pub fn icosphere(radius: f64, subdivisions: usize) -> TriMesh {
    let p = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v: Vec<Vec3> = [
        (-1.0, p, 0.0),
        (1.0, p, 0.0),
        (-1.0, -p, 0.0),
        (1.0, -p, 0.0),
        (0.0, -1.0, p),
        (0.0, 1.0, p),
        (0.0, -1.0, -p),
        (0.0, 1.0, -p),
        (p, 0.0, -1.0),
        (p, 0.0, 1.0),
        (-p, 0.0, -1.0),
        (-p, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut mid = |a: usize, b: usize, v: &mut Vec<Vec3>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoint.entry(key).or_insert_with(|| {
                v.push(((v[a] + v[b]) * 0.5).normalize());
                v.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = mid(a, b, &mut v);
            let bc = mid(b, c, &mut v);
            let ca = mid(c, a, &mut v);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    let v = v.into_iter().map(|p| p * radius).collect();
    orient_outward(finish(v, faces))
}

/// Flat disc of the given radius in the plane z = 0, centered at the origin:
/// a center vertex plus `rings` concentric rings of `segments` vertices.
/// The boundary is the outermost ring.
pub fn flat_disc(radius: f64, rings: usize, segments: usize) -> TriMesh {
    annulus_like(0.0, radius, rings, segments, true)
}

/// Flat annulus `inner <= r <= outer` in the plane z = 0.
pub fn annulus(inner: f64, outer: f64, rings: usize, segments: usize) -> TriMesh {
    assert!(inner > 0.0 && outer > inner);
    annulus_like(inner, outer, rings, segments, false)
}

fn annulus_like(inner: f64, outer: f64, rings: usize, segments: usize, with_center: bool) -> TriMesh {
    assert!(rings >= 1 && segments >= 3);
    let mut v = Vec::new();
    let mut t = Vec::new();
    let first_ring = if with_center {
        v.push(Vec3::zeros());
        1
    } else {
        0
    };
    let base = v.len();
    for k in first_ring..=rings {
        let r = inner + (outer - inner) * k as f64 / rings as f64;
        for j in 0..segments {
            let phi = TAU * j as f64 / segments as f64;
            v.push(Vec3::new(r * phi.cos(), r * phi.sin(), 0.0));
        }
    }
    let ring = |k: usize, j: usize| base + (k - first_ring) * segments + j % segments;
    if with_center {
        for j in 0..segments {
            t.push([0, ring(1, j), ring(1, j + 1)]);
        }
    }
    for k in first_ring..rings {
        for j in 0..segments {
            t.push([ring(k, j), ring(k + 1, j), ring(k + 1, j + 1)]);
            t.push([ring(k, j), ring(k + 1, j + 1), ring(k, j + 1)]);
        }
    }
    finish(v, t)
}

/// Open circular cylinder about the z-axis between heights `z0 < z1`, with
/// `rows + 1` rings of `segments` vertices.
pub fn cylinder(radius: f64, z0: f64, z1: f64, segments: usize, rows: usize) -> TriMesh {
    assert!(segments >= 3 && rows >= 1 && z1 > z0);
    let mut v = Vec::new();
    for i in 0..=rows {
        let z = z0 + (z1 - z0) * i as f64 / rows as f64;
        for j in 0..segments {
            let phi = TAU * j as f64 / segments as f64;
            v.push(Vec3::new(radius * phi.cos(), radius * phi.sin(), z));
        }
    }
    let idx = |i: usize, j: usize| i * segments + j % segments;
    let mut t = Vec::new();
    for i in 0..rows {
        for j in 0..segments {
            t.push([idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)]);
            t.push([idx(i, j), idx(i + 1, j + 1), idx(i + 1, j)]);
        }
    }
    finish(v, t)
}

/// Torus of revolution about the z-axis: vertex `(i, j)` has index
/// `i * tube + j`, where `i` runs around the core circle and `j` around the
/// tube.
pub fn torus(major: f64, minor: f64, around: usize, tube: usize) -> TriMesh {
    assert!(around >= 3 && tube >= 3 && major > minor);
    let mut v = Vec::new();
    for i in 0..around {
        let u = TAU * i as f64 / around as f64;
        for j in 0..tube {
            let w = TAU * j as f64 / tube as f64;
            let r = major + minor * w.cos();
            v.push(Vec3::new(r * u.cos(), r * u.sin(), minor * w.sin()));
        }
    }
    let idx = |i: usize, j: usize| (i % around) * tube + j % tube;
    let mut t = Vec::new();
    for i in 0..around {
        for j in 0..tube {
            t.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            t.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    orient_outward(finish(v, t))
}

/// Meridian `i` of [`torus`]: the cycle of vertices around the tube, which
/// does not separate the torus.
pub fn torus_meridian(tube: usize, i: usize) -> Vec<usize> {
    (0..tube).map(|j| i * tube + j).collect()
}
