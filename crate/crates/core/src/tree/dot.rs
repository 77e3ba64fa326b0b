use std::fmt::Write;

use super::Multigraph;

/// Undirected DOT rendering. Vertices keep their indices as node ids; edges
/// appear in stored order, so parallel edges and self-loops are preserved.
pub fn to_dot(g: &Multigraph, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "graph {} {{", dot_id(name)).unwrap();
    for v in 0..g.vertex_count() {
        match g.vertex_labels() {
            Some(labels) => writeln!(out, "  {v} [label={}];", dot_id(&labels[v])).unwrap(),
            None => writeln!(out, "  {v};").unwrap(),
        }
    }
    for &(u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn dot_id(s: &str) -> String {
    let escaped = s.replace('\\', "\\\\").replace('"', "\\\"");
    format!("\"{escaped}\"")
}
