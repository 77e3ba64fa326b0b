use std::fmt::Write as _;
use std::path::Path;

use super::{MeshError, TriMesh};
use crate::geom::Vec3;

/// Serializes vertices and triangles only. Coordinates use the shortest
/// representation that round-trips exactly, so output is byte-stable.
pub fn write_obj(mesh: &TriMesh) -> String {
    let mut out = String::with_capacity(32 * (mesh.vertex_count() + mesh.triangle_count()));
    for p in mesh.vertices() {
        writeln!(out, "v {} {} {}", p.x, p.y, p.z).unwrap();
    }
    for t in mesh.triangles() {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).unwrap();
    }
    out
}

pub fn write_obj_file(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    std::fs::write(path, write_obj(mesh)).map_err(|e| MeshError::Io(e.to_string()))
}

/// Reads `v` and `f` records; every other record is ignored. Faces with more
/// than three corners are fanned, `v/vt/vn` corner syntax and negative
/// (relative) indices are accepted.
pub fn read_obj(text: &str) -> Result<TriMesh, MeshError> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let err = |message: String| MeshError::Obj { line: line_no, message };
        let line = line.split('#').next().unwrap_or("");
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("v") => {
                let coords: Vec<f64> = fields
                    .take(3)
                    .map(|f| f.parse::<f64>().map_err(|e| err(format!("bad coordinate {f:?}: {e}"))))
                    .collect::<Result<_, _>>()?;
                if coords.len() != 3 {
                    return Err(err("vertex needs three coordinates".into()));
                }
                vertices.push(Vec3::new(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let corners: Vec<usize> = fields
                    .map(|f| {
                        let first = f.split('/').next().unwrap_or("");
                        let i: i64 = first.parse().map_err(|e| err(format!("bad face index {f:?}: {e}")))?;
                        let resolved = if i > 0 {
                            i - 1
                        } else if i < 0 {
                            vertices.len() as i64 + i
                        } else {
                            return Err(err("face index 0".into()));
                        };
                        usize::try_from(resolved).map_err(|_| err(format!("face index {i} out of range")))
                    })
                    .collect::<Result<_, _>>()?;
                if corners.len() < 3 {
                    return Err(err("face needs at least three corners".into()));
                }
                for k in 1..corners.len() - 1 {
                    triangles.push([corners[0], corners[k], corners[k + 1]]);
                }
            }
            _ => {}
        }
    }
    TriMesh::new(vertices, triangles)
}

pub fn read_obj_file(path: impl AsRef<Path>) -> Result<TriMesh, MeshError> {
    let text = std::fs::read_to_string(path).map_err(|e| MeshError::Io(e.to_string()))?;
    read_obj(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::primitives;

    #[test]
    fn round_trip_is_exact() {
        let m = primitives::icosphere(0.125, 1);
        let text = write_obj(&m);
        let back = read_obj(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(write_obj(&back), text);
    }

    #[test]
    fn polygons_and_slashes() {
        let text = "# quad\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1 4//1\n";
        let m = read_obj(text).unwrap();
        assert_eq!(m.triangles(), &[[0, 1, 2], [0, 2, 3]]);
        let rel = read_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n").unwrap();
        assert_eq!(rel.triangles(), &[[0, 1, 2]]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match read_obj("v 0 0\n") {
            Err(MeshError::Obj { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        match read_obj("v 0 0 0\nf 1 2 x\n") {
            Err(MeshError::Obj { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            read_obj("v 0 0 0\nf 1 2 3\n"),
            Err(MeshError::IndexOutOfRange { .. })
        ));
    }
}
