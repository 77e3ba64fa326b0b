//! Finite multigraphs, free trees and their canonical forms.
//!
//! A [`Multigraph`] allows self-loops and parallel edges, which is exactly
//! what a boundary graph on a surface of positive genus can produce. When the
//! ambient surface is a sphere the result is always a [`Tree`], and trees
//! have a canonical parenthesis string ([`CanonicalCode`]) so that
//! isomorphism becomes string equality.

mod canonical;
mod dot;
mod enumerate;
mod iso;
mod parse;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canonical::{ahu_code, rooted_code, trees_isomorphic, CanonicalCode};
pub use dot::to_dot;
pub use enumerate::{cayley_lower_bound, enumerate_free_trees, MAX_ENUMERATION_SIZE};
pub use iso::multigraphs_isomorphic;
pub use parse::parse_tree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("empty tree text")]
    EmptyInput,
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("edge ({0}, {1}) has an endpoint outside the vertex range")]
    EndpointOutOfRange(usize, usize),
    #[error("vertex label count {labels} does not match vertex count {vertices}")]
    LabelCount { labels: usize, vertices: usize },
    #[error("not a tree: {0}")]
    NotATree(&'static str),
    #[error("tree size {0} outside the supported range 1..={max}", max = MAX_ENUMERATION_SIZE)]
    SizeOutOfRange(usize),
    #[error("invalid canonical code: {0}")]
    InvalidCode(String),
}

/// A finite undirected graph that may contain self-loops and parallel edges.
///
/// Edge order carries no meaning; every operation in this crate is invariant
/// under permuting the edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertex_labels: Option<Vec<String>>,
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, TreeError> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertex_count || v >= vertex_count) {
            return Err(TreeError::EndpointOutOfRange(u, v));
        }
        Ok(Multigraph {
            vertex_count,
            edges,
            vertex_labels: None,
        })
    }

    /// Attaches display labels. Labels only show up in DOT output; they play
    /// no role in isomorphism.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, TreeError> {
        if labels.len() != self.vertex_count {
            return Err(TreeError::LabelCount {
                labels: labels.len(),
                vertices: self.vertex_count,
            });
        }
        self.vertex_labels = Some(labels);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_labels(&self) -> Option<&[String]> {
        self.vertex_labels.as_deref()
    }

    pub fn self_loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// Degree with the usual convention that a self-loop contributes 2.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Symmetric edge-multiplicity matrix; the diagonal counts self-loops.
    pub fn multiplicities(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count;
        let mut m = vec![vec![0; n]; n];
        for &(u, v) in &self.edges {
            m[u][v] += 1;
            if u != v {
                m[v][u] += 1;
            }
        }
        m
    }

    pub(crate) fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            if u != v {
                adj[v].push(u);
            }
        }
        adj
    }

    /// Number of connected components. Zero for the empty graph.
    pub fn component_count(&self) -> usize {
        let adj = self.adjacency_lists();
        let mut seen = vec![false; self.vertex_count];
        let mut count = 0;
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Returns the graph obtained by sending vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Multigraph {
        assert_eq!(perm.len(), self.vertex_count, "permutation size");
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let vertex_labels = self.vertex_labels.as_ref().map(|labels| {
            let mut out = vec![String::new(); labels.len()];
            for (v, l) in labels.iter().enumerate() {
                out[perm[v]] = l.clone();
            }
            out
        });
        Multigraph {
            vertex_count: self.vertex_count,
            edges,
            vertex_labels,
        }
    }
}

/// True iff `g` is connected, has at least one vertex, exactly
/// `vertex_count - 1` edges, and neither self-loops nor parallel edges.
pub fn is_tree(g: &Multigraph) -> bool {
    g.vertex_count >= 1 && g.edges.len() == g.vertex_count - 1 && g.self_loop_count() == 0 && g.is_connected()
}

/// An unrooted free tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Multigraph", into = "Multigraph")]
pub struct Tree(Multigraph);

impl Tree {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, TreeError> {
        Tree::try_from(Multigraph::new(vertex_count, edges)?)
    }

    /// The one-vertex tree.
    pub fn single() -> Tree {
        Tree(Multigraph {
            vertex_count: 1,
            edges: Vec::new(),
            vertex_labels: None,
        })
    }

    /// Path on `n >= 1` vertices, numbered along the path.
    pub fn path(n: usize) -> Tree {
        assert!(n >= 1, "a path needs at least one vertex");
        Tree::new(n, (1..n).map(|i| (i - 1, i)).collect()).expect("path is a tree")
    }

    /// Star on `n >= 1` vertices with center 0.
    pub fn star(n: usize) -> Tree {
        assert!(n >= 1, "a star needs at least one vertex");
        Tree::new(n, (1..n).map(|i| (0, i)).collect()).expect("star is a tree")
    }

    pub fn vertex_count(&self) -> usize {
        self.0.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.0.edges
    }

    pub fn as_multigraph(&self) -> &Multigraph {
        &self.0
    }

    pub fn into_multigraph(self) -> Multigraph {
        self.0
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        self.0.adjacency_lists()
    }

    pub fn relabel(&self, perm: &[usize]) -> Tree {
        Tree(self.0.relabel(perm))
    }

    /// Returns the tree with a new leaf attached to `vertex`.
    pub fn with_leaf_at(&self, vertex: usize) -> Tree {
        let mut g = self.0.clone();
        g.edges.push((vertex, g.vertex_count));
        g.vertex_count += 1;
        g.vertex_labels = None;
        Tree(g)
    }

    /// The one or two vertices minimizing eccentricity, in increasing order.
    pub fn centers(&self) -> Vec<usize> {
        let n = self.vertex_count();
        if n <= 2 {
            return (0..n).collect();
        }
        let adj = self.neighbors();
        let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                for &w in &adj[leaf] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }

    /// Parent pointers and BFS order for the tree rooted at `root`.
    pub fn rooted(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let adj = self.neighbors();
        let n = self.vertex_count();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        (parent, order)
    }

    /// Eccentricity of `root`: the depth of the tree rooted there.
    pub fn depth_from(&self, root: usize) -> usize {
        let (parent, order) = self.rooted(root);
        let mut depth = vec![0usize; self.vertex_count()];
        for &v in &order {
            if let Some(p) = parent[v] {
                depth[v] = depth[p] + 1;
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }
}

impl TryFrom<Multigraph> for Tree {
    type Error = TreeError;

    fn try_from(g: Multigraph) -> Result<Self, Self::Error> {
        if g.vertex_count == 0 {
            return Err(TreeError::NotATree("no vertices"));
        }
        if g.self_loop_count() > 0 {
            return Err(TreeError::NotATree("self-loop"));
        }
        if g.edges.len() + 1 != g.vertex_count {
            return Err(TreeError::NotATree("edge count is not vertex count - 1"));
        }
        if !g.is_connected() {
            return Err(TreeError::NotATree("disconnected"));
        }
        Ok(Tree(g))
    }
}

impl From<Tree> for Multigraph {
    fn from(t: Tree) -> Self {
        t.0
    }
}
