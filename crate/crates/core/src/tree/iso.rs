use std::collections::BTreeMap;

use super::Multigraph;

/// Exact isomorphism test for multigraphs, respecting edge multiplicities
/// and self-loops.
///
/// Vertices are first colored by joint color refinement over both graphs
/// (degree and loop count, then neighbor color multisets). A mismatch in the
/// color histograms is an immediate rejection; otherwise a backtracking
/// search extends a partial bijection within color classes, checking the
/// multiplicity matrix against every vertex already mapped.
pub fn multigraphs_isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    if a.self_loop_count() != b.self_loop_count() {
        return false;
    }
    if n == 0 {
        return true;
    }
    let ma = a.multiplicities();
    let mb = b.multiplicities();
    let (ca, cb) = match refine_colors(&ma, &mb) {
        Some(colors) => colors,
        None => return false,
    };

    // Most constrained first: small color classes, then high degree.
    let mut class_size: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &ca {
        *class_size.entry(c).or_default() += 1;
    }
    let deg = a.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&ca[v]], std::cmp::Reverse(deg[v]), v));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(0, &order, &ma, &mb, &ca, &cb, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    ma: &[Vec<usize>],
    mb: &[Vec<usize>],
    ca: &[usize],
    cb: &[usize],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&u) = order.get(depth) else {
        return true;
    };
    for x in 0..mb.len() {
        if used[x] || cb[x] != ca[u] || mb[x][x] != ma[u][u] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&w| ma[u][w] == mb[x][map[w]]);
        if !consistent {
            continue;
        }
        map[u] = x;
        used[x] = true;
        if extend(depth + 1, order, ma, mb, ca, cb, map, used) {
            return true;
        }
        used[x] = false;
        map[u] = usize::MAX;
    }
    false
}

/// Joint 1-dimensional Weisfeiler-Leman refinement. Returns `None` when the
/// color histograms of the two graphs diverge.
fn refine_colors(ma: &[Vec<usize>], mb: &[Vec<usize>]) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = ma.len();
    let initial = |m: &[Vec<usize>], v: usize| -> (usize, usize) {
        let loops = m[v][v];
        let deg: usize = m[v].iter().sum::<usize>() + loops;
        (deg, loops)
    };
    let mut table = BTreeMap::new();
    let sig_a: Vec<_> = (0..n).map(|v| initial(ma, v)).collect();
    let sig_b: Vec<_> = (0..n).map(|v| initial(mb, v)).collect();
    for s in sig_a.iter().chain(&sig_b) {
        let next = table.len();
        table.entry(*s).or_insert(next);
    }
    let mut ca: Vec<usize> = sig_a.iter().map(|s| table[s]).collect();
    let mut cb: Vec<usize> = sig_b.iter().map(|s| table[s]).collect();
    if !same_histogram(&ca, &cb) {
        return None;
    }

    let mut classes = table.len();
    loop {
        let signature = |m: &[Vec<usize>], colors: &[usize], v: usize| {
            let mut nb: Vec<(usize, usize)> = (0..n)
                .filter(|&w| w != v && m[v][w] > 0)
                .map(|w| (colors[w], m[v][w]))
                .collect();
            nb.sort_unstable();
            (colors[v], nb)
        };
        let sa: Vec<_> = (0..n).map(|v| signature(ma, &ca, v)).collect();
        let sb: Vec<_> = (0..n).map(|v| signature(mb, &cb, v)).collect();
        let mut table = BTreeMap::new();
        for s in sa.iter().chain(&sb) {
            let next = table.len();
            table.entry(s.clone()).or_insert(next);
        }
        ca = sa.iter().map(|s| table[s]).collect();
        cb = sb.iter().map(|s| table[s]).collect();
        if !same_histogram(&ca, &cb) {
            return None;
        }
        if table.len() == classes {
            return Some((ca, cb));
        }
        classes = table.len();
    }
}

fn same_histogram(a: &[usize], b: &[usize]) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_unstable();
    y.sort_unstable();
    x == y
}
