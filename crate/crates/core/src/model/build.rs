//! Meshing of a laid-out model surface before any handles are attached.

use super::chart::{circle_table, triangulate_domain, ChartPolygon, SteinerSet, P2};
use super::layout::{FeatureKind, Layout, SPHERE_RADIUS};
use super::ModelError;
use crate::geom::{tangent_frame, Vec3};

#[derive(Debug, Default)]
pub(crate) struct Builder {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
}

impl Builder {
    pub fn add(&mut self, p: Vec3) -> usize {
        self.vertices.push(p);
        self.vertices.len() - 1
    }

    pub fn add_all(&mut self, ps: &[Vec3]) -> Vec<usize> {
        ps.iter().map(|&p| self.add(p)).collect()
    }

    /// Joins consecutive rings (same length, same angular parametrization)
    /// by quad strips.
    pub fn tube(&mut self, rings: &[Vec<usize>]) {
        for w in rings.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let n = a.len();
            for k in 0..n {
                let k1 = (k + 1) % n;
                self.triangles.push([a[k], a[k1], b[k1]]);
                self.triangles.push([a[k], b[k1], b[k]]);
            }
        }
    }

    /// Rings interpolated linearly between `bottom` and `top`, which are
    /// added as well, so that consecutive rings are at most four ring
    /// spacings apart.
    pub fn straight_tube(&mut self, bottom: &[usize], top: &[usize], radius: f64) {
        let n = bottom.len();
        let spacing = std::f64::consts::TAU * radius / n as f64;
        let len = (0..n)
            .map(|k| (self.vertices[top[k]] - self.vertices[bottom[k]]).norm())
            .fold(0.0, f64::max);
        let segments = ((len / (4.0 * spacing)).ceil() as usize).clamp(1, 64);
        let mut rings = vec![bottom.to_vec()];
        for s in 1..segments {
            let t = s as f64 / segments as f64;
            let ring: Vec<Vec3> = (0..n)
                .map(|k| self.vertices[bottom[k]] * (1.0 - t) + self.vertices[top[k]] * t)
                .collect();
            rings.push(self.add_all(&ring));
        }
        rings.push(top.to_vec());
        self.tube(&rings);
    }
}

struct Bridge {
    bottom: Vec<usize>,
    top: Vec<usize>,
}

/// Radius of each graded ring is the previous one times this factor, which
/// keeps ring spacing and radial spacing equal.
fn growth(n: usize) -> f64 {
    1.0 + std::f64::consts::TAU / n as f64
}

pub(crate) struct SphereSite {
    pub direction: Vec3,
    pub angle: f64,
}

/// Builds the central sphere, the discs and the bridges.
pub(crate) fn build_surface(
    layout: &Layout,
    resolution: usize,
    mirror: bool,
    site: Option<&SphereSite>,
) -> Result<Builder, ModelError> {
    let table = circle_table(resolution);
    let mut b = Builder::default();

    let mut bridges: Vec<Option<Bridge>> = (0..layout.features.len()).map(|_| None).collect();
    for f in &layout.features {
        let Some(p) = f.parent else { continue };
        let (u, w) = tangent_frame(&f.normal);
        let rho = f.bridge_radius;
        let parent = layout.feature(p);
        let dirs: Vec<Vec3> = table.iter().map(|&(c, s)| u * c + w * s).collect();
        let bottom: Vec<Vec3> = dirs
            .iter()
            .map(|d| {
                let t = match parent.kind {
                    FeatureKind::Sphere => (SPHERE_RADIUS * SPHERE_RADIUS - rho * rho).sqrt(),
                    FeatureKind::Disc => (parent.offset() - rho * d.dot(&parent.normal)) / f.normal.dot(&parent.normal),
                };
                f.normal * t + d * rho
            })
            .collect();
        let top: Vec<Vec3> = dirs.iter().map(|d| f.center + d * rho).collect();
        let bottom = b.add_all(&bottom);
        let top = b.add_all(&top);
        b.straight_tube(&bottom, &top, rho);
        bridges[f.vertex] = Some(Bridge { bottom, top });
    }

    for f in &layout.features {
        match f.kind {
            FeatureKind::Sphere => sphere_chart(&mut b, layout, &bridges, resolution, mirror, site)?,
            FeatureKind::Disc => disc_chart(&mut b, layout, f.vertex, &bridges, resolution, mirror)?,
        }
    }
    Ok(b)
}

fn disc_chart(
    b: &mut Builder,
    layout: &Layout,
    v: usize,
    bridges: &[Option<Bridge>],
    n: usize,
    mirror: bool,
) -> Result<(), ModelError> {
    let f = layout.feature(v);
    let (e1, ey) = tangent_frame(&f.normal);
    let c = f.center;
    let big_r = f.radius;
    let to2 = |p: &Vec3| -> P2 { [(p - c).dot(&e1), (p - c).dot(&ey)] };
    let table = circle_table(n);

    let mut outer = ChartPolygon::default();
    for &(cs, sn) in &table {
        let p = c + (e1 * cs + ey * sn) * big_r;
        let id = b.add(p);
        outer.push(to2(&p), id);
    }
    let own = bridges[v].as_ref().expect("every disc has a parent bridge");
    let mut holes = vec![polygon(b, &own.top, &to2)];
    // Child holes as (center x, semi-axis along e1, semi-axis along y).
    let mut ellipses = Vec::new();
    for &ch in &f.children {
        let br = bridges[ch].as_ref().expect("child bridge");
        let poly = polygon(b, &br.bottom, &to2);
        let xs: Vec<f64> = poly.points.iter().map(|p| p[0]).collect();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        ellipses.push(((lo + hi) / 2.0, (hi - lo) / 2.0, layout.feature(ch).bridge_radius));
        holes.push(poly);
    }

    let coarse = std::f64::consts::TAU * big_r / n as f64;
    let q = growth(n);
    let rho = f.bridge_radius;
    let mut candidates: Vec<(Vec3, f64)> = Vec::new();
    let ring = |cx: f64, ax: f64, by: f64, scale: f64, odd: bool, out: &mut Vec<(Vec3, f64)>| {
        let spacing = std::f64::consts::TAU * by.max(ax) * scale / n as f64;
        for k in 0..n {
            let t = std::f64::consts::TAU * (k as f64 + if odd { 0.5 } else { 0.0 }) / n as f64;
            let p = c + e1 * (cx + ax * scale * t.cos()) + ey * (by * scale * t.sin());
            out.push((p, spacing));
        }
    };
    let mut m = 1;
    while rho * q.powi(m) < big_r {
        ring(0.0, rho, rho, q.powi(m), m % 2 == 1, &mut candidates);
        m += 1;
    }
    for &(cx, ax, by) in &ellipses {
        let mut m = 1;
        while ax * q.powi(m) < big_r && std::f64::consts::TAU * ax * q.powi(m) / (n as f64) < coarse {
            ring(cx, ax, by, q.powi(m), m % 2 == 1, &mut candidates);
            m += 1;
        }
    }
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1));

    let accept = |p: &Vec3, margin: f64| {
        let [x, y] = to2(p);
        let r = x.hypot(y);
        r <= big_r - margin
            && r >= rho + margin
            && ellipses.iter().all(|&(cx, ax, by)| {
                let u = (x - cx) / (ax + margin);
                let w = y / (by + margin);
                u * u + w * w >= 1.0
            })
    };
    let mut steiner = SteinerSet::new(coarse, mirror);
    for (p, spacing) in candidates {
        steiner.offer(p, spacing, |q| accept(q, 0.5 * spacing), |q| q - ey * q.dot(&ey));
    }
    finish_chart(b, &outer, &holes, &steiner.points, &to2)
}

fn polygon(b: &Builder, ids: &[usize], to2: &impl Fn(&Vec3) -> P2) -> ChartPolygon {
    let mut poly = ChartPolygon::default();
    for &id in ids {
        poly.push(to2(&b.vertices[id]), id);
    }
    poly
}

fn finish_chart(
    b: &mut Builder,
    outer: &ChartPolygon,
    holes: &[ChartPolygon],
    steiner: &[Vec3],
    to2: &impl Fn(&Vec3) -> P2,
) -> Result<(), ModelError> {
    let pts: Vec<(P2, usize)> = steiner.iter().map(|p| (to2(p), b.add(*p))).collect();
    let tris = triangulate_domain(outer, holes, &pts).map_err(ModelError::Triangulation)?;
    b.triangles.extend(tris);
    Ok(())
}

/// Polar angle measured from +y.
fn polar(p: &Vec3) -> f64 {
    (p.y / p.norm()).clamp(-1.0, 1.0).acos()
}

fn sphere_chart(
    b: &mut Builder,
    layout: &Layout,
    bridges: &[Option<Bridge>],
    n: usize,
    mirror: bool,
    site: Option<&SphereSite>,
) -> Result<(), ModelError> {
    let rs = SPHERE_RADIUS;
    // Stereographic projection from the +y pole. The polar cap around that
    // pole is fanned separately, so the chart stays bounded.
    let to2 = |p: &Vec3| -> P2 {
        let u = p / rs;
        [u.x / (1.0 - u.y), u.z / (1.0 - u.y)]
    };
    let step = std::f64::consts::TAU / n as f64;
    let beta = (3.0 * step).min(0.6);
    let ring_n = ((n as f64 * beta.sin()).round() as usize).max(8);
    let ring_pts: Vec<Vec3> = circle_table(ring_n)
        .iter()
        .map(|&(c, s)| Vec3::new(beta.sin() * c, beta.cos(), beta.sin() * s) * rs)
        .collect();
    let cap_ring = b.add_all(&ring_pts);
    let pole = b.add(Vec3::new(0.0, rs, 0.0));
    for k in 0..ring_n {
        b.triangles.push([pole, cap_ring[(k + 1) % ring_n], cap_ring[k]]);
    }
    let mut outer = ChartPolygon::default();
    for &id in &cap_ring {
        outer.push(to2(&b.vertices[id]), id);
    }

    let root = layout.feature(layout.root);
    let mut holes = Vec::new();
    let mut hole_caps = Vec::new();
    for &ch in &root.children {
        let br = bridges[ch].as_ref().expect("child bridge");
        holes.push(polygon(b, &br.bottom, &to2));
        let f = layout.feature(ch);
        hole_caps.push((f.normal, (f.bridge_radius / rs).asin()));
    }

    let coarse = rs * step;
    let q = growth(n);
    let mut candidates: Vec<(Vec3, f64)> = Vec::new();
    let around = |axis: &Vec3, angle: f64, count: usize, odd: bool, spacing: f64, out: &mut Vec<(Vec3, f64)>| {
        let (u, w) = tangent_frame(axis);
        for k in 0..count {
            let t = std::f64::consts::TAU * (k as f64 + if odd { 0.5 } else { 0.0 }) / count as f64;
            let d = axis * angle.cos() + (u * t.cos() + w * t.sin()) * angle.sin();
            out.push((d * rs, spacing));
        }
    };

    // Latitude rings strictly between the two polar rings.
    let lat_n = ((std::f64::consts::PI - 2.0 * beta) / step).ceil() as usize;
    let dpsi = (std::f64::consts::PI - 2.0 * beta) / lat_n as f64;
    for k in 1..lat_n {
        let psi = beta + k as f64 * dpsi;
        let count = ((std::f64::consts::TAU * psi.sin() / step).round() as usize).max(6);
        around(&Vec3::y(), psi, count, k % 2 == 1, coarse, &mut candidates);
    }
    for &(axis, alpha) in &hole_caps {
        let mut m = 1;
        while rs * (alpha * q.powi(m)).sin() * step < coarse && alpha * q.powi(m) < 1.0 {
            let a = alpha * q.powi(m);
            around(&axis, a, n, m % 2 == 1, rs * a.sin() * step, &mut candidates);
            m += 1;
        }
    }
    if let Some(site) = site {
        // Fine, nearly uniform rings over the handle site, then graded rings
        // out to the coarse spacing.
        let fine = coarse.min(rs * site.angle / 8.0);
        candidates.push((site.direction * rs, fine));
        let da = fine / rs;
        let mut a = da;
        while a <= 1.3 * site.angle {
            let count = ((std::f64::consts::TAU * a.sin() * rs / fine).ceil() as usize).max(6);
            around(&site.direction, a, count, false, fine, &mut candidates);
            a += da;
        }
        let mut spacing = fine;
        while spacing < coarse && a < 1.2 {
            let count = ((std::f64::consts::TAU * a.sin() * rs / spacing).ceil() as usize).max(6);
            around(&site.direction, a, count, false, spacing, &mut candidates);
            a += spacing / rs;
            spacing *= q;
        }
    }
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut steiner = SteinerSet::new(coarse, mirror);
    // The polar rings and poles are mirror images of each other; only the
    // southern ones are Steiner points.
    let south_ring: Vec<Vec3> = ring_pts.iter().map(|p| Vec3::new(p.x, -p.y, p.z)).collect();
    for p in south_ring.iter().chain(std::iter::once(&Vec3::new(0.0, -rs, 0.0))) {
        steiner.push_fixed(*p);
    }
    for p in &ring_pts {
        steiner.reserve(*p);
    }
    let accept = |p: &Vec3, margin: f64| {
        let psi = polar(p);
        let da = margin / rs;
        psi >= beta + da
            && psi <= std::f64::consts::PI - beta - da
            && hole_caps
                .iter()
                .all(|(axis, alpha)| (p.dot(axis) / rs).clamp(-1.0, 1.0).acos() >= alpha + da)
    };
    for (p, spacing) in candidates {
        steiner.offer(
            p,
            spacing,
            |q| accept(q, 0.5 * spacing),
            |q| Vec3::new(q.x, 0.0, q.z).normalize() * rs,
        );
    }
    finish_chart(b, &outer, &holes, &steiner.points, &to2)
}
