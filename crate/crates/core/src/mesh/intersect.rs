//! Triangle/triangle intersection for mesh self-intersection checks.
//!
//! Pairs that share an edge or vertex always touch there; only contact
//! beyond the shared simplex counts. Everything else is a separating-axis
//! test in which a gap of at most `eps` still counts as contact.

use crate::geom::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrianglePairKind {
    Disjoint,
    /// Positions within each triangle of the shared vertex.
    SharedVertex(usize, usize),
    /// Positions within the first triangle of the two shared vertices, and
    /// of the remaining vertex in each triangle.
    SharedEdge {
        opposite_a: usize,
        opposite_b: usize,
    },
    Duplicate,
}

pub fn classify_pair(a: &[usize; 3], b: &[usize; 3]) -> TrianglePairKind {
    let mut shared = Vec::with_capacity(3);
    for (i, va) in a.iter().enumerate() {
        if let Some(j) = b.iter().position(|vb| vb == va) {
            shared.push((i, j));
        }
    }
    match shared.len() {
        0 => TrianglePairKind::Disjoint,
        1 => TrianglePairKind::SharedVertex(shared[0].0, shared[0].1),
        2 => {
            let opposite_a = 3 - shared[0].0 - shared[1].0;
            let opposite_b = 3 - shared[0].1 - shared[1].1;
            TrianglePairKind::SharedEdge { opposite_a, opposite_b }
        }
        _ => TrianglePairKind::Duplicate,
    }
}

/// True iff the closed triangles intersect anywhere other than along the
/// vertices or edge they share by index.
pub fn triangles_intersect(ia: &[usize; 3], pa: &[Vec3; 3], ib: &[usize; 3], pb: &[Vec3; 3], eps: f64) -> bool {
    match classify_pair(ia, ib) {
        TrianglePairKind::Disjoint => tri_tri(pa, pb, eps),
        TrianglePairKind::SharedVertex(i, j) => {
            // If the intersection held a point p besides the shared vertex s,
            // the ray from s through p leaves one triangle through its
            // opposite edge while still inside the other.
            let a_opp = [pa[(i + 1) % 3], pa[(i + 2) % 3]];
            let b_opp = [pb[(j + 1) % 3], pb[(j + 2) % 3]];
            seg_tri(&a_opp, pb, eps) || seg_tri(&b_opp, pa, eps)
        }
        TrianglePairKind::SharedEdge { opposite_a, opposite_b } => folded_over(pa, opposite_a, &pb[opposite_b], eps),
        TrianglePairKind::Duplicate => true,
    }
}

/// Two triangles sharing an edge overlap iff they are coplanar and lie on
/// the same side of the shared edge.
fn folded_over(pa: &[Vec3; 3], opposite_a: usize, d: &Vec3, eps: f64) -> bool {
    let c = pa[opposite_a];
    let a = pa[(opposite_a + 1) % 3];
    let b = pa[(opposite_a + 2) % 3];
    let n = (b - a).cross(&(c - a));
    let nn = n.norm();
    if nn == 0.0 {
        return true;
    }
    let n = n / nn;
    if n.dot(&(d - a)).abs() > eps {
        return false;
    }
    let edge = b - a;
    let side_c = edge.cross(&(c - a)).dot(&n);
    let side_d = edge.cross(&(d - a)).dot(&n);
    side_c * side_d > 0.0
}

fn separated(a: &[Vec3], b: &[Vec3], axis: &Vec3, eps: f64) -> bool {
    let (mut amin, mut amax) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in a {
        let d = p.dot(axis);
        amin = amin.min(d);
        amax = amax.max(d);
    }
    let (mut bmin, mut bmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in b {
        let d = p.dot(axis);
        bmin = bmin.min(d);
        bmax = bmax.max(d);
    }
    amax + eps < bmin || bmax + eps < amin
}

fn unit_axis(v: Vec3, scale: f64) -> Option<Vec3> {
    let n = v.norm();
    (n > 1e-12 * scale).then(|| v / n)
}

fn tri_tri(pa: &[Vec3; 3], pb: &[Vec3; 3], eps: f64) -> bool {
    let ea = [pa[1] - pa[0], pa[2] - pa[1], pa[0] - pa[2]];
    let eb = [pb[1] - pb[0], pb[2] - pb[1], pb[0] - pb[2]];
    let na = ea[0].cross(&ea[1]);
    let nb = eb[0].cross(&eb[1]);
    let mut axes = Vec::with_capacity(17);
    let la: f64 = ea.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let lb: f64 = eb.iter().map(|e| e.norm()).fold(0.0, f64::max);
    axes.extend(unit_axis(na, la * la));
    axes.extend(unit_axis(nb, lb * lb));
    for x in &ea {
        for y in &eb {
            axes.extend(unit_axis(x.cross(y), la * lb));
        }
    }
    for x in &ea {
        axes.extend(unit_axis(x.cross(&na), la * la * la));
    }
    for y in &eb {
        axes.extend(unit_axis(y.cross(&nb), lb * lb * lb));
    }
    !axes.iter().any(|ax| separated(pa, pb, ax, eps))
}

fn seg_tri(seg: &[Vec3; 2], tri: &[Vec3; 3], eps: f64) -> bool {
    let d = seg[1] - seg[0];
    let e = [tri[1] - tri[0], tri[2] - tri[1], tri[0] - tri[2]];
    let n = e[0].cross(&e[1]);
    let ld = d.norm();
    let lt: f64 = e.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut axes = Vec::with_capacity(8);
    axes.extend(unit_axis(n, lt * lt));
    for x in &e {
        axes.extend(unit_axis(d.cross(x), ld * lt));
        axes.extend(unit_axis(x.cross(&n), lt * lt * lt));
    }
    axes.extend(unit_axis(d.cross(&n), ld * lt * lt));
    !axes.iter().any(|ax| separated(seg, tri, ax, eps))
}
