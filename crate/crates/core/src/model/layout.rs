//! Placement of the model-surface features: the central sphere, one flat
//! disc per non-root tree vertex, and one radial bridge per tree edge.
//!
//! Every disc is the intersection of the unit ball with a plane whose normal
//! lies in the xz-plane; its boundary circle bounds a spherical cap. Children
//! of a disc get caps nested inside their parent's cap, lined up along the
//! xz great circle on both sides of the parent's central bridge hole.

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::geom::{segment_segment_distance_sq, tangent_frame, vec3_serde, xz_direction, Vec3};
use crate::tree::Tree;

/// Radius of the central sphere.
pub const SPHERE_RADIUS: f64 = 0.125;

const MAX_ROOT_CAP: f64 = std::f64::consts::FRAC_PI_3;
const MIN_FEATURE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Sphere,
    Disc,
}

/// One tree vertex realized as a surface feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feature {
    pub vertex: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
    pub kind: FeatureKind,
    /// Disc plane normal; the central sphere reports +x.
    #[serde(with = "vec3_serde")]
    pub normal: Vec3,
    #[serde(with = "vec3_serde")]
    pub center: Vec3,
    /// Sphere radius, or the radius of the disc's boundary circle.
    pub radius: f64,
    /// Angular radius of the disc's cap on the unit sphere (0 for the sphere).
    pub cap_angle: f64,
    /// Radius of the bridge joining this feature to its parent (0 at the root).
    pub bridge_radius: f64,
}

impl Feature {
    /// Distance of the disc plane from the origin.
    pub fn offset(&self) -> f64 {
        self.center.norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub root: usize,
    pub features: Vec<Feature>,
}

fn collision(depth: usize, detail: impl Into<String>) -> ModelError {
    ModelError::FeatureCollision {
        depth,
        detail: detail.into(),
    }
}

impl Layout {
    pub fn new(tree: &Tree, root: usize, shrink: f64) -> Result<Layout, ModelError> {
        let n = tree.vertex_count();
        let (parent, order) = tree.rooted(root);
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        for &v in &order {
            if let Some(p) = parent[v] {
                children[p].push(v);
                depth[v] = depth[p] + 1;
            }
        }
        for c in &mut children {
            c.sort_unstable();
        }
        let mut features: Vec<Feature> = (0..n)
            .map(|v| Feature {
                vertex: v,
                parent: parent[v],
                children: children[v].clone(),
                depth: depth[v],
                kind: if v == root {
                    FeatureKind::Sphere
                } else {
                    FeatureKind::Disc
                },
                normal: Vec3::x(),
                center: Vec3::zeros(),
                radius: SPHERE_RADIUS,
                cap_angle: 0.0,
                bridge_radius: 0.0,
            })
            .collect();

        let k = children[root].len();
        if k > 0 {
            let kf = k as f64;
            let theta = MAX_ROOT_CAP.min(0.8 * std::f64::consts::PI / kf);
            // Bridge holes on the sphere stay well inside their share of the
            // equator.
            let rho =
                (0.25 * SPHERE_RADIUS.min(theta.sin())).min(SPHERE_RADIUS * (0.3 * std::f64::consts::PI / kf).sin());
            for (i, &c) in children[root].iter().enumerate() {
                let normal = xz_direction(std::f64::consts::TAU * i as f64 / kf);
                place_disc(&mut features[c], normal, theta, rho);
            }
        }
        for &v in &order {
            if v != root && !children[v].is_empty() {
                place_children(&mut features, v, shrink)?;
            }
        }
        let layout = Layout { root, features };
        layout.verify()?;
        Ok(layout)
    }

    pub fn feature(&self, v: usize) -> &Feature {
        &self.features[v]
    }

    pub fn max_depth(&self) -> usize {
        self.features.iter().map(|f| f.depth).max().unwrap_or(0)
    }

    /// Parameter range `[t_lo, t_hi]` along the bridge axis of disc `v`.
    pub(crate) fn bridge_span(&self, v: usize) -> (f64, f64) {
        let f = &self.features[v];
        let p = &self.features[f.parent.expect("bridges join a disc to its parent")];
        let rho = f.bridge_radius;
        let lo = match p.kind {
            FeatureKind::Sphere => (SPHERE_RADIUS * SPHERE_RADIUS - rho * rho).sqrt(),
            FeatureKind::Disc => (p.offset() - rho) / f.normal.dot(&p.normal),
        };
        (lo, f.offset())
    }

    fn is_ancestor(&self, a: usize, mut v: usize) -> bool {
        while let Some(p) = self.features[v].parent {
            if p == a {
                return true;
            }
            v = p;
        }
        false
    }

    fn verify(&self) -> Result<(), ModelError> {
        let discs: Vec<&Feature> = self.features.iter().filter(|f| f.kind == FeatureKind::Disc).collect();
        for f in &discs {
            if f.bridge_radius < MIN_FEATURE || f.cap_angle < MIN_FEATURE {
                return Err(collision(
                    f.depth,
                    format!("feature of vertex {} is too small", f.vertex),
                ));
            }
        }
        // A bridge lies entirely on the near side of every disc outside its
        // own line of descent, so it cannot meet that disc or anything
        // nested beyond it.
        for b in &discs {
            let (lo, hi) = self.bridge_span(b.vertex);
            for d in &discs {
                let u = d.vertex;
                if u == b.vertex
                    || Some(u) == b.parent
                    || self.is_ancestor(u, b.vertex)
                    || self.is_ancestor(b.vertex, u)
                {
                    continue;
                }
                let c = b.normal.dot(&d.normal);
                let reach = (lo * c).max(hi * c) + b.bridge_radius * (1.0 - c * c).max(0.0).sqrt();
                if reach > d.offset() - 1e-3 * d.radius {
                    return Err(collision(
                        b.depth.max(d.depth),
                        format!("bridge to vertex {} reaches the disc of vertex {}", b.vertex, u),
                    ));
                }
            }
        }
        // Sibling bridges leave the same parent; their capsules must be
        // disjoint.
        for f in &self.features {
            for (i, &a) in f.children.iter().enumerate() {
                for &b in &f.children[i + 1..] {
                    let (fa, fb) = (&self.features[a], &self.features[b]);
                    let (la, ha) = self.bridge_span(a);
                    let (lb, hb) = self.bridge_span(b);
                    let d2 = segment_segment_distance_sq(
                        &(fa.normal * la),
                        &(fa.normal * ha),
                        &(fb.normal * lb),
                        &(fb.normal * hb),
                    );
                    if d2.sqrt() <= (fa.bridge_radius + fb.bridge_radius) * 1.05 {
                        return Err(collision(fa.depth, format!("bridges to vertices {a} and {b} collide")));
                    }
                }
            }
        }
        Ok(())
    }
}

fn place_disc(f: &mut Feature, normal: Vec3, theta: f64, rho: f64) {
    f.normal = normal;
    f.center = normal * theta.cos();
    f.radius = theta.sin();
    f.cap_angle = theta;
    f.bridge_radius = rho;
}

/// Lines the children of disc `v` up along the xz great circle, alternating
/// right and left of the parent's central hole, with caps shrinking until
/// every local constraint holds.
fn place_children(features: &mut [Feature], v: usize, shrink: f64) -> Result<(), ModelError> {
    let parent = features[v].clone();
    let kids = parent.children.clone();
    let depth = parent.depth + 1;
    let m = kids.len();
    let theta_p = parent.cap_angle;
    let h = parent.offset();
    let big_r = parent.radius;
    let rho_p = parent.bridge_radius;
    let (e1, _) = tangent_frame(&parent.normal);
    let avail = 0.9 * theta_p;
    let per_side = m.div_ceil(2) as f64;

    let mut rho_guess = 0.25 * (shrink * theta_p).sin().min(big_r);
    let (mut gap, mut width, mut theta_c) = (0.0, 0.0, 0.0);
    for _ in 0..4 {
        gap = ((1.3 * rho_p + 1.3 * rho_guess / avail.cos()) / h).atan();
        width = (avail - gap) / per_side;
        if width <= 0.0 {
            return Err(collision(depth, format!("no room for the children of vertex {v}")));
        }
        theta_c = (0.4 * width).min(shrink * theta_p);
        rho_guess = 0.25 * theta_c.sin().min(big_r);
    }

    for attempt in 0..16 {
        let theta = theta_c * 0.8f64.powi(attempt);
        let rho = 0.25 * theta.sin().min(big_r);
        let angles: Vec<f64> = (0..m)
            .map(|i| {
                let a = gap + ((i / 2) as f64 + 0.5) * width;
                if i % 2 == 0 {
                    a
                } else {
                    -a
                }
            })
            .collect();
        if local_fit(&angles, theta, rho, theta_p, h, big_r, rho_p) {
            for (i, &c) in kids.iter().enumerate() {
                let a = angles[i];
                let normal = parent.normal * a.cos() + e1 * a.sin();
                place_disc(&mut features[c], normal, theta, rho);
            }
            return Ok(());
        }
    }
    Err(collision(
        depth,
        format!("children of vertex {v} do not fit in its cap"),
    ))
}

fn local_fit(angles: &[f64], theta: f64, rho: f64, theta_p: f64, h: f64, big_r: f64, rho_p: f64) -> bool {
    // Hole of each child bridge on the parent plane: an ellipse centered on
    // the e1 axis with semi-axes rho / cos a and rho.
    let holes: Vec<(f64, f64)> = angles.iter().map(|&a| (h * a.tan(), rho / a.cos())).collect();
    for (i, &a) in angles.iter().enumerate() {
        let (x, half) = holes[i];
        if a.abs() + theta > 0.95 * theta_p || x.abs() - half < 1.1 * rho_p || x.abs() + half > 0.95 * big_r {
            return false;
        }
        for (j, &b) in angles.iter().enumerate().skip(i + 1) {
            let (y, other) = holes[j];
            if (a - b).abs() < 2.05 * theta || (x - y).abs() < 1.1 * (half + other) {
                return false;
            }
        }
    }
    true
}
