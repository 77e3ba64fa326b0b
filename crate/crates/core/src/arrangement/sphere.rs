use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ArrangementError;
use crate::geom::{Aabb, Vec3, EPSILON};
use crate::mesh::Bvh;
use crate::tree::Tree;

/// Seed for the reference-point generator when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0;
/// Reference points tried before giving up on a degenerate configuration.
pub const REFERENCE_RETRIES: usize = 16;

/// Closed polyline on the unit sphere. Consecutive points are joined by the
/// minor great-circle arc, and the last point joins the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<[f64; 3]>", into = "Vec<[f64; 3]>")]
pub struct SphericalLoop {
    points: Vec<Vec3>,
}

impl SphericalLoop {
    /// Takes the points as given; [`validate_loops`] checks that they are on
    /// the sphere.
    pub fn new(points: Vec<Vec3>) -> Self {
        SphericalLoop { points }
    }

    /// Projects every point radially onto the unit sphere. Zero vectors are
    /// kept and later rejected by validation.
    pub fn projected(points: impl IntoIterator<Item = Vec3>) -> Self {
        SphericalLoop {
            points: points
                .into_iter()
                .map(|p| {
                    let n = p.norm();
                    if n > 0.0 {
                        p / n
                    } else {
                        p
                    }
                })
                .collect(),
        }
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn segment(&self, k: usize) -> (Vec3, Vec3) {
        (self.points[k], self.points[(k + 1) % self.points.len()])
    }
}

impl From<Vec<[f64; 3]>> for SphericalLoop {
    fn from(v: Vec<[f64; 3]>) -> Self {
        SphericalLoop::new(v.into_iter().map(Vec3::from).collect())
    }
}

impl From<SphericalLoop> for Vec<[f64; 3]> {
    fn from(l: SphericalLoop) -> Self {
        l.points.iter().map(|p| [p.x, p.y, p.z]).collect()
    }
}

fn angle(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Angular distance from `p` to the minor arc `ab`.
fn point_arc_distance(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let n = a.cross(b);
    let nn = n.norm();
    let ends = angle(p, a).min(angle(p, b));
    if nn < 1e-15 {
        return ends;
    }
    let n = n / nn;
    let h = p.dot(&n);
    let q = p - n * h;
    if q.norm() > 1e-15 && a.cross(&q).dot(&n) >= 0.0 && q.cross(b).dot(&n) >= 0.0 {
        h.clamp(-1.0, 1.0).asin().abs()
    } else {
        ends
    }
}

/// True iff the minor arcs `ab` and `cd` cross at a point interior to both.
pub fn arcs_cross(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> bool {
    let nab = a.cross(b);
    let ncd = c.cross(d);
    let s1 = nab.dot(c);
    let s2 = nab.dot(d);
    let s3 = ncd.dot(a);
    let s4 = ncd.dot(b);
    if s1 * s2 >= 0.0 || s3 * s4 >= 0.0 {
        return false;
    }
    // Both great circles meet at ±x; the arcs cross iff the same one of the
    // two points lies on both arcs.
    let x = nab.cross(&ncd);
    let on_ab = |x: &Vec3| a.cross(x).dot(&nab) > 0.0 && x.cross(b).dot(&nab) > 0.0;
    let on_cd = |x: &Vec3| c.cross(x).dot(&ncd) > 0.0 && x.cross(d).dot(&ncd) > 0.0;
    (on_ab(&x) && on_cd(&x)) || (on_ab(&-x) && on_cd(&-x))
}

fn arc_arc_distance(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> f64 {
    if arcs_cross(a, b, c, d) {
        return 0.0;
    }
    point_arc_distance(a, c, d)
        .min(point_arc_distance(b, c, d))
        .min(point_arc_distance(c, a, b))
        .min(point_arc_distance(d, a, b))
}

/// Box around a minor arc: the chord box grown by the arc's sagitta.
fn arc_box(a: &Vec3, b: &Vec3, pad: f64) -> Aabb {
    let half = 0.5 * angle(a, b);
    Aabb::from_points([a, b]).inflate(1.0 - half.cos() + pad)
}

/// Checks that every loop has at least three points on the unit sphere, has
/// no zero-length or antipodal segments, is simple, and stays more than
/// `2 * EPSILON` away from every other loop.
pub fn validate_loops(loops: &[SphericalLoop]) -> Result<(), ArrangementError> {
    let mut segs = Vec::new();
    for (i, l) in loops.iter().enumerate() {
        if l.len() < 3 {
            return Err(ArrangementError::DegenerateLoop(i));
        }
        for (k, p) in l.points.iter().enumerate() {
            let norm = p.norm();
            if (norm - 1.0).abs() > EPSILON {
                return Err(ArrangementError::OffSphere {
                    index: i,
                    point: k,
                    norm,
                });
            }
        }
        for k in 0..l.len() {
            let (a, b) = l.segment(k);
            let t = angle(&a, &b);
            if t <= EPSILON || t >= std::f64::consts::PI - EPSILON {
                return Err(ArrangementError::DegenerateLoop(i));
            }
            segs.push((i, k));
        }
    }

    let boxes: Vec<Aabb> = segs
        .iter()
        .map(|&(i, k)| {
            let (a, b) = loops[i].segment(k);
            arc_box(&a, &b, 2.0 * EPSILON)
        })
        .collect();
    let bvh = Bvh::build(&boxes);
    for (s, &(i, k)) in segs.iter().enumerate() {
        let (a, b) = loops[i].segment(k);
        for t in bvh.query(&boxes[s]) {
            if t <= s {
                continue;
            }
            let (j, m) = segs[t];
            let (c, d) = loops[j].segment(m);
            if i != j {
                if arc_arc_distance(&a, &b, &c, &d) <= 2.0 * EPSILON {
                    return Err(ArrangementError::LoopsIntersect(i, j));
                }
                continue;
            }
            let n = loops[i].len();
            let bad = if m == (k + 1) % n {
                // b is shared with c; the arcs must not double back.
                point_arc_distance(&d, &a, &b) <= EPSILON || point_arc_distance(&a, &c, &d) <= EPSILON
            } else if k == (m + 1) % n {
                point_arc_distance(&c, &a, &b) <= EPSILON || point_arc_distance(&b, &c, &d) <= EPSILON
            } else {
                arc_arc_distance(&a, &b, &c, &d) <= EPSILON
            };
            if bad {
                return Err(ArrangementError::LoopNotSimple(i));
            }
        }
    }
    Ok(())
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(r * phi.cos(), r * phi.sin(), z)
}

/// Parity of the crossings of the minor arc `qp` with loop `l`, or `None`
/// when a loop vertex sits on the arc within tolerance.
fn crossing_parity(q: &Vec3, p: &Vec3, l: &SphericalLoop) -> Option<bool> {
    let n = q.cross(p).normalize();
    let mut odd = false;
    for k in 0..l.len() {
        let (c, d) = l.segment(k);
        let sc = c.dot(&n);
        let sd = d.dot(&n);
        if sc.abs() <= EPSILON && point_arc_distance(&c, q, p) <= 2.0 * EPSILON {
            return None;
        }
        if (sc > EPSILON && sd < -EPSILON) || (sc < -EPSILON && sd > EPSILON) {
            let t = sc / (sc - sd);
            let x = c + (d - c) * t;
            if q.cross(&x).dot(&n) > 0.0 && x.cross(p).dot(&n) > 0.0 {
                odd = !odd;
            }
        }
    }
    Some(odd)
}

/// Boundary graph of disjoint simple loops on the unit sphere, with the
/// default seed. See [`sphere_boundary_graph_seeded`].
pub fn sphere_boundary_graph(loops: &[SphericalLoop]) -> Result<Tree, ArrangementError> {
    sphere_boundary_graph_seeded(loops, DEFAULT_SEED)
}

/// Boundary graph of disjoint simple loops on the unit sphere.
///
/// A random reference point `p` is drawn from a generator seeded with
/// `seed`. For every loop `i`, the disc `D_i` is the side of loop `i` away
/// from `p`; loop `j` lies in `D_i` exactly when the arc from a point of loop
/// `j` to `p` crosses loop `i` an odd number of times. These discs nest, so
/// the regions form a tree: vertex 0 is the region containing `p`, vertex
/// `i + 1` is the region just inside loop `i`, and loop `i` becomes the edge
/// from its parent's region to `i + 1`. Near-degenerate reference points are
/// redrawn up to [`REFERENCE_RETRIES`] times. The isomorphism class of the
/// result does not depend on the seed.
pub fn sphere_boundary_graph_seeded(loops: &[SphericalLoop], seed: u64) -> Result<Tree, ArrangementError> {
    validate_loops(loops)?;
    let n = loops.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..REFERENCE_RETRIES {
        let p = random_unit(&mut rng);
        for l in loops {
            for k in 0..l.len() {
                let (a, b) = l.segment(k);
                if point_arc_distance(&p, &a, &b) <= EPSILON {
                    continue 'attempt;
                }
            }
        }
        // inside[i][j]: loop j lies in D_i.
        let mut inside = vec![vec![false; n]; n];
        for j in 0..n {
            let q = loops[j].points[0];
            if q.cross(&p).norm() < 1e-6 {
                continue 'attempt;
            }
            for i in 0..n {
                if i == j {
                    continue;
                }
                match crossing_parity(&q, &p, &loops[i]) {
                    Some(odd) => inside[i][j] = odd,
                    None => continue 'attempt,
                }
            }
        }
        return nesting_tree(&inside).map(|edges| Tree::new(n + 1, edges).expect("nesting forest rooted at 0"));
    }
    Err(ArrangementError::ReferencePoint(REFERENCE_RETRIES))
}

fn nesting_tree(inside: &[Vec<bool>]) -> Result<Vec<(usize, usize)>, ArrangementError> {
    let n = inside.len();
    let ancestors: Vec<Vec<usize>> = (0..n).map(|j| (0..n).filter(|&i| inside[i][j]).collect()).collect();
    let mut edges = Vec::with_capacity(n);
    for j in 0..n {
        let depth = ancestors[j].len();
        let parents: Vec<usize> = ancestors[j]
            .iter()
            .copied()
            .filter(|&i| ancestors[i].len() + 1 == depth)
            .collect();
        let parent = match parents.as_slice() {
            [] if depth == 0 => 0,
            [i] => {
                let mut chain = ancestors[*i].clone();
                chain.push(*i);
                chain.sort_unstable();
                if chain != ancestors[j] {
                    return Err(ArrangementError::InconsistentNesting(*i, j));
                }
                i + 1
            }
            _ => return Err(ArrangementError::InconsistentNesting(ancestors[j][0], j)),
        };
        edges.push((parent, j + 1));
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::tangent_frame;
    use crate::tree::{ahu_code, trees_isomorphic};

    fn cap(axis: Vec3, radius: f64, k: usize) -> SphericalLoop {
        let axis = axis.normalize();
        let (u, w) = tangent_frame(&axis);
        SphericalLoop::projected((0..k).map(|i| {
            let t = std::f64::consts::TAU * i as f64 / k as f64;
            axis * radius.cos() + (u * t.cos() + w * t.sin()) * radius.sin()
        }))
    }

    #[test]
    fn single_loop_is_an_edge() {
        let t = sphere_boundary_graph(&[cap(Vec3::z(), 1.0, 24)]).unwrap();
        assert!(trees_isomorphic(&t, &Tree::path(2)));
    }

    #[test]
    fn three_disjoint_caps_give_a_star() {
        let loops = [
            cap(Vec3::x(), 0.4, 20),
            cap(Vec3::y(), 0.4, 20),
            cap(Vec3::z(), 0.4, 20),
        ];
        for seed in 0..8 {
            let t = sphere_boundary_graph_seeded(&loops, seed).unwrap();
            assert!(trees_isomorphic(&t, &Tree::star(4)));
        }
    }

    #[test]
    fn concentric_loops_give_a_path() {
        let loops: Vec<_> = (1..=4).map(|k| cap(Vec3::z(), 0.5 * k as f64, 30)).collect();
        let t = sphere_boundary_graph(&loops).unwrap();
        assert!(trees_isomorphic(&t, &Tree::path(5)));
    }

    #[test]
    fn mixed_nesting_is_seed_independent() {
        let loops = [
            cap(Vec3::z(), 1.2, 40),
            cap(Vec3::new(0.2, 0.0, 1.0), 0.3, 16),
            cap(Vec3::new(-0.3, 0.3, 1.0), 0.2, 16),
            cap(-Vec3::z(), 0.5, 16),
            cap(Vec3::new(0.0, 0.3, -1.0), 0.1, 12),
        ];
        let first = ahu_code(&sphere_boundary_graph_seeded(&loops, 0).unwrap());
        for seed in 1..20 {
            assert_eq!(ahu_code(&sphere_boundary_graph_seeded(&loops, seed).unwrap()), first);
        }
    }

    #[test]
    fn intersecting_loops_are_rejected() {
        let loops = [cap(Vec3::z(), 0.5, 24), cap(Vec3::new(0.5, 0.0, 1.0), 0.5, 24)];
        assert!(matches!(
            sphere_boundary_graph(&loops),
            Err(ArrangementError::LoopsIntersect(0, 1))
        ));
    }

    #[test]
    fn figure_eight_is_not_simple() {
        let pts = [
            Vec3::new(0.3, 0.3, 1.0),
            Vec3::new(-0.3, -0.3, 1.0),
            Vec3::new(-0.3, 0.3, 1.0),
            Vec3::new(0.3, -0.3, 1.0),
        ];
        let l = SphericalLoop::projected(pts);
        assert!(matches!(
            sphere_boundary_graph(&[l]),
            Err(ArrangementError::LoopNotSimple(0))
        ));
    }

    #[test]
    fn malformed_loops_are_rejected() {
        let two = SphericalLoop::projected([Vec3::x(), Vec3::y()]);
        assert!(matches!(
            validate_loops(&[two]),
            Err(ArrangementError::DegenerateLoop(0))
        ));
        let off = SphericalLoop::new(vec![Vec3::x() * 2.0, Vec3::y(), Vec3::z()]);
        assert!(matches!(
            validate_loops(&[off]),
            Err(ArrangementError::OffSphere { .. })
        ));
    }

    #[test]
    fn arc_crossing_predicate() {
        let a = Vec3::new(1.0, -0.2, 0.0).normalize();
        let b = Vec3::new(1.0, 0.2, 0.0).normalize();
        let c = Vec3::new(1.0, 0.0, -0.2).normalize();
        let d = Vec3::new(1.0, 0.0, 0.2).normalize();
        assert!(arcs_cross(&a, &b, &c, &d));
        assert!(!arcs_cross(&a, &b, &-c, &-d));
        assert!(!arcs_cross(&a, &b, &c, &Vec3::new(1.0, 0.1, -0.1).normalize()));
    }

    #[test]
    fn loops_round_trip_through_json() {
        let l = cap(Vec3::z(), 0.3, 5);
        let text = serde_json::to_string(&l).unwrap();
        assert!(text.starts_with("[["));
        let back: SphericalLoop = serde_json::from_str(&text).unwrap();
        assert_eq!(back, l);
    }
}
