//! Indexed triangle meshes: topology queries, OBJ I/O, primitive builders
//! and the bounding-volume hierarchy behind the self-intersection test.

mod bvh;
mod intersect;
mod obj;
pub mod primitives;
mod trimesh;

pub use bvh::Bvh;
pub use intersect::{classify_pair, triangles_intersect, TrianglePairKind};
pub use obj::{read_obj, read_obj_file, write_obj, write_obj_file};
pub use trimesh::{EdgeKey, MeshError, TriMesh};
