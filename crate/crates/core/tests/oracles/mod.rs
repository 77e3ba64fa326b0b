//! Reference implementations the library is checked against. They favour
//! obviousness over speed and share no code paths with the library beyond
//! basic mesh storage and the triangle pair predicate.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use unknot_kit::geom::{Vec3, EPSILON};
use unknot_kit::mesh::{primitives, triangles_intersect, TriMesh};
use unknot_kit::tree::Multigraph;

/// Edges of the labelled tree with the given Prüfer sequence.
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::new();
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn encode(v: usize, parent: usize, adj: &[Vec<usize>]) -> String {
    let mut parts: Vec<String> = adj[v]
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| encode(u, v, adj))
        .collect();
    parts.sort();
    format!("({})", parts.concat())
}

/// Canonical string of a tree: the least rooted encoding over all roots.
pub fn brute_canonical(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    (0..n).map(|r| encode(r, usize::MAX, &adj)).min().expect("n >= 1")
}

/// Number of unlabelled trees on `n` vertices, from all `n^(n-2)` Prüfer
/// sequences.
pub fn prufer_class_count(n: usize) -> usize {
    if n <= 2 {
        return usize::from(n >= 1);
    }
    let mut classes = BTreeSet::new();
    let mut seq = vec![0; n - 2];
    for k in 0..n.pow(n as u32 - 2) {
        let mut k = k;
        for s in seq.iter_mut() {
            *s = k % n;
            k /= n;
        }
        classes.insert(brute_canonical(n, &prufer_decode(&seq, n)));
    }
    classes.len()
}

/// Random labelled tree on `n` vertices.
pub fn random_tree_edges(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    match n {
        1 => Vec::new(),
        2 => vec![(0, 1)],
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_decode(&seq, n)
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn edge_multiset(g: &Multigraph, perm: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
        .collect();
    e.sort_unstable();
    e
}

/// Multigraph isomorphism by trying every vertex permutation.
pub fn brute_isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let identity: Vec<usize> = (0..n).collect();
    let target = edge_multiset(b, &identity);
    permutations(n).iter().any(|p| edge_multiset(a, p) == target)
}

/// Self-intersection by testing every pair of triangles.
pub fn all_pairs_self_intersects(m: &TriMesh) -> bool {
    let t = m.triangles();
    (0..t.len()).any(|i| {
        let pi = m.triangle_points(i);
        (i + 1..t.len()).any(|j| triangles_intersect(&t[i], &pi, &t[j], &m.triangle_points(j), EPSILON))
    })
}

/// A star-shaped cap on the unit sphere: points whose angular distance from
/// `center` is below `radius + wiggle * sin(lobes * azimuth + phase)`.
#[derive(Debug, Clone)]
pub struct Cap {
    pub center: Vec3,
    pub radius: f64,
    pub wiggle: f64,
    pub lobes: usize,
    pub phase: f64,
}

fn frame(n: &Vec3) -> (Vec3, Vec3) {
    let helper = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let u = n.cross(&helper).normalize();
    (u, n.cross(&u))
}

impl Cap {
    fn edge_angle(&self, azimuth: f64) -> f64 {
        self.radius + self.wiggle * (self.lobes as f64 * azimuth + self.phase).sin()
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        let (u, w) = frame(&self.center);
        let azimuth = p.dot(&w).atan2(p.dot(&u));
        let angle = p.dot(&self.center).clamp(-1.0, 1.0).acos();
        angle < self.edge_angle(azimuth)
    }

    pub fn polyline(&self, samples: usize) -> Vec<Vec3> {
        let (u, w) = frame(&self.center);
        (0..samples)
            .map(|k| {
                let az = std::f64::consts::TAU * k as f64 / samples as f64;
                let a = self.edge_angle(az);
                (self.center * a.cos() + (u * az.cos() + w * az.sin()) * a.sin()).normalize()
            })
            .collect()
    }
}

pub fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Up to `count` caps whose boundaries are pairwise at least `margin` apart:
/// each pair is either disjoint or nested.
pub fn random_caps(rng: &mut impl Rng, count: usize, margin: f64) -> Vec<Cap> {
    let mut caps: Vec<Cap> = Vec::new();
    for _ in 0..200 {
        if caps.len() == count {
            break;
        }
        let cap = Cap {
            center: random_unit(rng),
            radius: rng.gen_range(0.15..1.2),
            wiggle: rng.gen_range(0.0..0.05),
            lobes: rng.gen_range(1..6),
            phase: rng.gen_range(0.0..std::f64::consts::TAU),
        };
        let fits = caps.iter().all(|c| {
            let d = c.center.dot(&cap.center).clamp(-1.0, 1.0).acos();
            let slack = c.wiggle + cap.wiggle + margin;
            d > c.radius + cap.radius + slack || d < (c.radius - cap.radius).abs() - slack
        });
        if fits {
            caps.push(cap);
        }
    }
    caps
}

/// Boundary graph of the cap boundaries, found by flood-filling the
/// triangles of a fine icosphere that lie on the same sides of every cap.
pub fn flood_fill_graph(caps: &[Cap], subdivisions: usize) -> Multigraph {
    let m = primitives::icosphere(1.0, subdivisions);
    let labels: Vec<Vec<bool>> = (0..m.triangle_count())
        .map(|t| {
            let [a, b, c] = m.triangle_points(t);
            let centroid = ((a + b + c) / 3.0).normalize();
            caps.iter().map(|cap| cap.contains(&centroid)).collect()
        })
        .collect();
    let mut neighbours = vec![Vec::new(); m.triangle_count()];
    for tris in m.edge_triangles().values() {
        if let [s, t] = tris[..] {
            neighbours[s].push(t);
            neighbours[t].push(s);
        }
    }
    let mut region = vec![usize::MAX; m.triangle_count()];
    let mut count = 0;
    for start in 0..m.triangle_count() {
        if region[start] != usize::MAX {
            continue;
        }
        region[start] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for &u in &neighbours[t] {
                if region[u] == usize::MAX && labels[u] == labels[t] {
                    region[u] = count;
                    queue.push_back(u);
                }
            }
        }
        count += 1;
    }
    let mut sides: BTreeMap<usize, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for (t, ns) in neighbours.iter().enumerate() {
        for &u in ns {
            let differ: Vec<usize> = (0..caps.len()).filter(|&i| labels[t][i] != labels[u][i]).collect();
            if let [i] = differ[..] {
                let (a, b) = (region[t], region[u]);
                sides.entry(i).or_default().insert((a.min(b), a.max(b)));
            }
        }
    }
    let edges = (0..caps.len())
        .map(|i| {
            let pairs = &sides[&i];
            assert_eq!(
                pairs.len(),
                1,
                "loop {i} separates more than two regions at this resolution"
            );
            *pairs.iter().next().expect("one pair")
        })
        .collect();
    Multigraph::new(count, edges).expect("valid multigraph")
}

/// Rotation about a random axis by a random angle.
pub fn random_rotation(rng: &mut impl Rng) -> impl Fn(&Vec3) -> Vec3 {
    let k = random_unit(rng);
    let (s, c) = rng.gen_range(0.0..std::f64::consts::TAU).sin_cos();
    move |v: &Vec3| v * c + k.cross(v) * s + k * k.dot(v) * (1.0 - c)
}
