//! Graphs at infinity of surfaces with ends.
//!
//! Slicing a surface with the sphere of radius `R` about the origin gives a
//! system of loops on that sphere, and hence a boundary graph. For a
//! surface with ends these graphs agree for all large `R`; the common graph
//! is the graph at infinity. Meshes are finite, so every conclusion here is
//! about the radii actually tested.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{sphere_boundary_graph_seeded, ArrangementError, SphericalLoop, DEFAULT_SEED};
use crate::geom::{Vec3, EPSILON};
use crate::mesh::{primitives, MeshError, TriMesh};
use crate::tree::{ahu_code, CanonicalCode, Multigraph};

/// Smallest admissible lower slicing radius, `2 sqrt 2`.
pub const MIN_SLICE_RADIUS: f64 = 2.0 * std::f64::consts::SQRT_2;
/// Relative slack on [`MIN_SLICE_RADIUS`], so that `2.8284` is accepted.
pub const MIN_RADIUS_TOLERANCE: f64 = 1e-4;
/// Ratio between consecutive radii when no step count is given.
pub const DEFAULT_RATIO: f64 = 1.3;
/// Retries of a non-transversal slice at a jittered radius.
pub const JITTER_RETRIES: usize = 8;
/// Relative size of the jitter.
pub const JITTER: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShrinkerError {
    #[error("the sphere of radius {radius} passes within tolerance of vertex {vertex}; retry with a slightly different radius")]
    NonTransversal { radius: f64, vertex: usize },
    #[error("the slice at radius {radius} ends on the mesh boundary")]
    OpenCurve { radius: f64 },
    #[error("invalid radius range: {0}")]
    Range(String),
    #[error("resolution {0} is below 12")]
    Resolution(usize),
    #[error("extent {0} must exceed 4")]
    Extent(f64),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// The loops cut out by one sphere, rescaled to the unit sphere, and their
/// boundary graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceResult {
    pub radius: f64,
    pub loops: Vec<SphericalLoop>,
    pub graph: Multigraph,
    pub code: CanonicalCode,
}

impl SliceResult {
    /// One loop per line, each a JSON array of points.
    pub fn loops_jsonl(&self) -> String {
        self.loops
            .iter()
            .map(|l| serde_json::to_string(l).expect("loops serialize") + "\n")
            .collect()
    }
}

/// Point where the edge from the inside vertex `a` to the outside vertex `b`
/// meets the sphere `|x| = r`.
fn crossing(a: &Vec3, b: &Vec3, r: f64) -> Vec3 {
    let d = b - a;
    let c = a.norm_squared() - r * r;
    let h = a.dot(&d);
    let t = -c / (h + (h * h - d.norm_squared() * c).sqrt());
    a + d * t
}

/// Slices `m` with the sphere of radius `r` about the origin.
pub fn slice_graph(m: &TriMesh, r: f64) -> Result<SliceResult, ShrinkerError> {
    slice_graph_seeded(m, r, DEFAULT_SEED)
}

/// [`slice_graph`] with an explicit seed for the nesting test.
pub fn slice_graph_seeded(m: &TriMesh, r: f64, seed: u64) -> Result<SliceResult, ShrinkerError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(ShrinkerError::Range(format!("radius {r} is not positive")));
    }
    m.check_edge_manifold()?;
    let verts = m.vertices();
    let inside: Vec<bool> = verts
        .iter()
        .enumerate()
        .map(|(v, p)| {
            let d = p.norm();
            if (d - r).abs() <= EPSILON {
                Err(ShrinkerError::NonTransversal { radius: r, vertex: v })
            } else {
                Ok(d < r)
            }
        })
        .collect::<Result<_, _>>()?;

    // Each crossed triangle links its two crossed edges.
    let mut links: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for t in m.triangles() {
        let crossed: Vec<(usize, usize)> = (0..3)
            .map(|i| (t[i], t[(i + 1) % 3]))
            .filter(|&(a, b)| inside[a] != inside[b])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        if let [e, f] = crossed[..] {
            links.entry(e).or_default().push(f);
            links.entry(f).or_default().push(e);
        }
    }
    if links.values().any(|l| l.len() != 2) {
        return Err(ShrinkerError::OpenCurve { radius: r });
    }

    let mut loops = Vec::new();
    let mut seen: BTreeMap<(usize, usize), bool> = links.keys().map(|&e| (e, false)).collect();
    for &start in links.keys() {
        if seen[&start] {
            continue;
        }
        let mut points = Vec::new();
        let (mut prev, mut cur) = (start, start);
        loop {
            seen.insert(cur, true);
            let (a, b) = if inside[cur.0] { cur } else { (cur.1, cur.0) };
            points.push(crossing(&verts[a], &verts[b], r).normalize());
            let next = links[&cur]
                .iter()
                .copied()
                .find(|&e| e != prev)
                .unwrap_or(links[&cur][0]);
            prev = cur;
            cur = next;
            if cur == start {
                break;
            }
        }
        loops.push(SphericalLoop::new(points));
    }
    let tree = sphere_boundary_graph_seeded(&loops, seed)?;
    Ok(SliceResult {
        radius: r,
        code: ahu_code(&tree),
        graph: tree.into_multigraph(),
        loops,
    })
}

/// Summary of slices at geometrically spaced radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizationReport {
    /// Radii actually sliced, ascending; jittered radii are recorded as used.
    pub radii_tested: Vec<f64>,
    /// Canonical code of the slice graph at each tested radius.
    pub graphs: Vec<CanonicalCode>,
    /// The trailing half of the graphs are isomorphic.
    pub stabilized: bool,
    /// Smallest tested radius from which all graphs agree; an estimate only.
    pub r0_estimate: Option<f64>,
    pub graph_at_infinity: Option<CanonicalCode>,
    /// Largest vertex distance from the origin: the mesh stands in for the
    /// surface only inside this radius.
    pub truncation_radius: f64,
}

/// Number of radii spacing `[r_min, r_max]` by about [`DEFAULT_RATIO`].
pub fn default_steps(r_min: f64, r_max: f64) -> usize {
    ((r_max / r_min).ln() / DEFAULT_RATIO.ln()).ceil().max(1.0) as usize + 1
}

/// Geometrically spaced radii from `r_min` to `r_max` inclusive.
pub fn slice_radii(r_min: f64, r_max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![r_min];
    }
    let ratio = r_max / r_min;
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                r_max
            } else {
                r_min * ratio.powf(i as f64 / (steps - 1) as f64)
            }
        })
        .collect()
}

/// Slices at `steps` geometrically spaced radii in `[r_min, r_max]` and
/// reports whether the trailing `ceil(steps / 2)` graphs agree.
pub fn graph_at_infinity(
    m: &TriMesh,
    r_min: f64,
    r_max: f64,
    steps: usize,
) -> Result<StabilizationReport, ShrinkerError> {
    graph_at_infinity_seeded(m, r_min, r_max, steps, DEFAULT_SEED)
}

/// [`graph_at_infinity`] with an explicit seed for jitter and nesting tests.
pub fn graph_at_infinity_seeded(
    m: &TriMesh,
    r_min: f64,
    r_max: f64,
    steps: usize,
    seed: u64,
) -> Result<StabilizationReport, ShrinkerError> {
    if r_min.is_nan() || r_min < MIN_SLICE_RADIUS * (1.0 - MIN_RADIUS_TOLERANCE) {
        return Err(ShrinkerError::Range(format!("r_min {r_min} is below 2 sqrt 2")));
    }
    if !(r_max > r_min && r_max.is_finite()) {
        return Err(ShrinkerError::Range(format!(
            "r_max {r_max} does not exceed r_min {r_min}"
        )));
    }
    if steps == 0 {
        return Err(ShrinkerError::Range("at least one radius is needed".into()));
    }
    let radii = slice_radii(r_min, r_max, steps);
    let slices = radii
        .par_iter()
        .enumerate()
        .map(|(i, &r)| jittered_slice(m, r, seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>, _>>()?;

    let graphs: Vec<CanonicalCode> = slices.iter().map(|s| s.code.clone()).collect();
    let last = graphs.last().expect("steps > 0").clone();
    let tail = steps.div_ceil(2);
    let stabilized = graphs[steps - tail..].iter().all(|g| *g == last);
    let from = graphs.iter().rposition(|g| *g != last).map_or(0, |i| i + 1);
    Ok(StabilizationReport {
        radii_tested: slices.iter().map(|s| s.radius).collect(),
        stabilized,
        r0_estimate: stabilized.then(|| slices[from].radius),
        graph_at_infinity: stabilized.then_some(last),
        graphs,
        truncation_radius: m.vertices().iter().map(|p| p.norm()).fold(0.0, f64::max),
    })
}

fn jittered_slice(m: &TriMesh, r: f64, seed: u64) -> Result<SliceResult, ShrinkerError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut radius = r;
    let mut attempt = 0;
    loop {
        match slice_graph_seeded(m, radius, seed) {
            Err(ShrinkerError::NonTransversal { .. } | ShrinkerError::Arrangement(_)) if attempt < JITTER_RETRIES => {
                attempt += 1;
                radius = r * (1.0 + JITTER * rng.gen_range(-1.0..1.0));
            }
            other => return other,
        }
    }
}

/// The genus-zero self-shrinkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShrinkerKind {
    /// A plane through the origin, as a disc of radius `extent`.
    Plane,
    /// The round sphere of radius 2.
    Sphere2,
    /// The round cylinder of radius 2 about the z-axis, `|z| <= extent`.
    Cylinder2,
}

impl std::str::FromStr for ShrinkerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plane" => Ok(ShrinkerKind::Plane),
            "sphere2" => Ok(ShrinkerKind::Sphere2),
            "cylinder2" => Ok(ShrinkerKind::Cylinder2),
            _ => Err(format!("unknown shrinker '{s}'; expected plane, sphere2 or cylinder2")),
        }
    }
}

/// Triangulation of a builtin shrinker with `resolution` segments per
/// circle. Plane and cylinder are truncated at `extent`.
pub fn builtin_shrinker(kind: ShrinkerKind, extent: f64, resolution: usize) -> Result<TriMesh, ShrinkerError> {
    if resolution < 12 {
        return Err(ShrinkerError::Resolution(resolution));
    }
    if kind != ShrinkerKind::Sphere2 && !(extent > 4.0 && extent.is_finite()) {
        return Err(ShrinkerError::Extent(extent));
    }
    let n = resolution;
    Ok(match kind {
        ShrinkerKind::Plane => graded_disc(extent, n),
        ShrinkerKind::Sphere2 => primitives::uv_sphere(2.0, n / 2, n),
        ShrinkerKind::Cylinder2 => {
            let spacing = std::f64::consts::TAU * 2.0 / n as f64;
            let rows = (2.0 * extent / spacing).ceil() as usize;
            primitives::cylinder(2.0, -extent, extent, n, rows)
        }
    })
}

/// Disc in the plane z = 0 whose ring radii grow geometrically outward, so
/// the triangles stay well shaped at every scale.
fn graded_disc(extent: f64, n: usize) -> TriMesh {
    let q = 1.0 + std::f64::consts::TAU / n as f64;
    let rings = ((extent / 0.5).ln() / q.ln()).ceil() as usize;
    let mut v = vec![Vec3::zeros()];
    for k in 0..=rings {
        let r = extent * q.powi(k as i32 - rings as i32);
        for j in 0..n {
            let phi = std::f64::consts::TAU * (j as f64 + 0.5 * (k % 2) as f64) / n as f64;
            v.push(Vec3::new(r * phi.cos(), r * phi.sin(), 0.0));
        }
    }
    let idx = |k: usize, j: usize| 1 + k * n + j % n;
    let mut t = Vec::new();
    for j in 0..n {
        t.push([0, idx(0, j), idx(0, j + 1)]);
    }
    for k in 0..rings {
        for j in 0..n {
            // Odd rings are rotated half a step, so the strip zigzags.
            let (a0, a1) = (idx(k, j), idx(k, j + 1));
            let (b0, b1) = if k % 2 == 0 {
                (idx(k + 1, j), idx(k + 1, j + 1))
            } else {
                (idx(k + 1, j + 1), idx(k + 1, j + 2))
            };
            t.push([a0, b0, a1]);
            t.push([a1, b0, b1]);
        }
    }
    let mut m = TriMesh::new(v, t).expect("valid indices");
    m.orient_consistently().expect("discs are orientable");
    m
}
