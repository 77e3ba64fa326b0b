//! Small geometric vocabulary shared by the mesh and arrangement code.

use nalgebra::Vector3;

pub type Vec3 = Vector3<f64>;

/// Absolute tolerance used by every geometric predicate in the crate.
pub const EPSILON: f64 = 1e-9;

/// Unit vector along +y; the generated model surfaces are symmetric under
/// reflection across the plane orthogonal to it.
pub fn e_y() -> Vec3 {
    Vec3::new(0.0, 1.0, 0.0)
}

/// Unit vector in the xz-plane at angle `phi` from +x towards +z.
pub fn xz_direction(phi: f64) -> Vec3 {
    Vec3::new(phi.cos(), 0.0, phi.sin())
}

/// A right-handed orthonormal pair `(u, w)` spanning the plane orthogonal to
/// the unit vector `n`. When `n` is orthogonal to +y, `w` is exactly +y.
pub fn tangent_frame(n: &Vec3) -> (Vec3, Vec3) {
    let y = e_y();
    let w = y - n * n.dot(&y);
    let w = if w.norm() > 1e-6 {
        w.normalize()
    } else {
        let x = Vec3::x();
        (x - n * n.dot(&x)).normalize()
    };
    (w.cross(n), w)
}

/// Serde adapter writing a [`Vec3`] as a `[x, y, z]` array.
pub mod vec3_serde {
    use super::Vec3;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vec3, s: S) -> Result<S::Ok, S::Error> {
        [v.x, v.y, v.z].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec3, D::Error> {
        <[f64; 3]>::deserialize(d).map(Vec3::from)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn empty() -> Self {
        Aabb {
            min: Vec3::repeat(f64::INFINITY),
            max: Vec3::repeat(f64::NEG_INFINITY),
        }
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Vec3>) -> Self {
        let mut b = Aabb::empty();
        for p in points {
            b.grow(p);
        }
        b
    }

    pub fn grow(&mut self, p: &Vec3) {
        self.min = self.min.inf(p);
        self.max = self.max.sup(p);
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: self.min.inf(&other.min),
            max: self.max.sup(&other.max),
        }
    }

    pub fn inflate(&self, by: f64) -> Aabb {
        Aabb {
            min: self.min.add_scalar(-by),
            max: self.max.add_scalar(by),
        }
    }

    pub fn overlaps(&self, other: &Aabb) -> bool {
        (0..3).all(|i| self.min[i] <= other.max[i] && other.min[i] <= self.max[i])
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn longest_axis(&self) -> usize {
        let d = self.max - self.min;
        if d.x >= d.y && d.x >= d.z {
            0
        } else if d.y >= d.z {
            1
        } else {
            2
        }
    }
}

/// Squared distance between segments `p0p1` and `q0q1`.
pub fn segment_segment_distance_sq(p0: &Vec3, p1: &Vec3, q0: &Vec3, q1: &Vec3) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.dot(&d1);
    let e = d2.dot(&d2);
    let f = d2.dot(&r);
    let (s, t);
    if a <= f64::MIN_POSITIVE && e <= f64::MIN_POSITIVE {
        return r.norm_squared();
    }
    if a <= f64::MIN_POSITIVE {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= f64::MIN_POSITIVE {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let c1 = p0 + d1 * s;
    let c2 = q0 + d2 * t;
    (c1 - c2).norm_squared()
}

/// Squared distance from `p` to the segment `ab`.
pub fn point_segment_distance_sq(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm_squared();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (a + ab * t - p).norm_squared()
}

/// Squared distance from `p` to the triangle `abc` (Ericson, closest point
/// on triangle).
pub fn point_triangle_distance_sq(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return ap.norm_squared();
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return bp.norm_squared();
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (a + ab * v - p).norm_squared();
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return cp.norm_squared();
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (a + ac * w - p).norm_squared();
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (b + (c - b) * w - p).norm_squared();
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (a + ab * v + ac * w - p).norm_squared()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_is_orthonormal_and_uses_y() {
        let n = xz_direction(0.7);
        let (u, w) = tangent_frame(&n);
        assert!((w - e_y()).norm() < 1e-15);
        assert!(u.dot(&n).abs() < 1e-15);
        assert!((u.cross(&w) - n).norm() < 1e-12);
        let (u2, w2) = tangent_frame(&e_y());
        assert!(u2.dot(&w2).abs() < 1e-15);
        assert!(u2.dot(&e_y()).abs() < 1e-15);
    }

    #[test]
    fn segment_distances() {
        let o = Vec3::zeros();
        let x = Vec3::x();
        let d = segment_segment_distance_sq(&o, &x, &Vec3::new(0.5, 1.0, -1.0), &Vec3::new(0.5, 1.0, 1.0));
        assert!((d - 1.0).abs() < 1e-12);
        let parallel = segment_segment_distance_sq(&o, &x, &Vec3::new(2.0, 0.0, 0.0), &Vec3::new(3.0, 0.0, 0.0));
        assert!((parallel - 1.0).abs() < 1e-12);
        assert!((point_segment_distance_sq(&Vec3::new(0.5, 2.0, 0.0), &o, &x) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_distance_regions() {
        let a = Vec3::zeros();
        let b = Vec3::x();
        let c = Vec3::y();
        let inside = point_triangle_distance_sq(&Vec3::new(0.2, 0.2, 3.0), &a, &b, &c);
        assert!((inside - 9.0).abs() < 1e-12);
        let vertex = point_triangle_distance_sq(&Vec3::new(-1.0, -1.0, 0.0), &a, &b, &c);
        assert!((vertex - 2.0).abs() < 1e-12);
        let edge = point_triangle_distance_sq(&Vec3::new(1.0, 1.0, 0.0), &a, &b, &c);
        assert!((edge - 0.5).abs() < 1e-12);
    }
}
