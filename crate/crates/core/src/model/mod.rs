//! Model surfaces: a central sphere of radius 1/8, one flat disc per
//! non-root tree vertex, cylindrical bridges along the tree edges and `g`
//! handles on the sphere. Every disc boundary is a circle on the unit sphere,
//! so the surface is properly embedded in the unit ball and its boundary
//! graph is the input tree.

mod build;
mod chart;
mod genus;
mod layout;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use genus::{attach_genus, attach_genus_with, GenusSite, DEFAULT_HANDLE_SEGMENTS};
pub use layout::{Feature, FeatureKind, Layout, SPHERE_RADIUS};

use crate::geom::xz_direction;
use crate::mesh::{MeshError, TriMesh};
use crate::tree::{ahu_code, Tree};
use build::{build_surface, SphereSite};

/// Schema tag written into every JSON document.
pub const SCHEMA: &str = "unknot-kit/1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid model spec: {0}")]
    InvalidSpec(String),
    #[error("features collide at tree depth {depth}: {detail}")]
    FeatureCollision { depth: usize, detail: String },
    #[error("triangulation failed: {0}")]
    Triangulation(String),
    #[error("cannot attach handles: {0}")]
    GenusSite(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Input of [`generate_model_surface`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSurfaceSpec {
    pub tree: Tree,
    pub genus: usize,
    /// Vertex realized by the central sphere; a tree center when `None`.
    pub root_vertex: Option<usize>,
    /// Segments per circle.
    pub resolution: usize,
    /// Scale of a child feature relative to its parent.
    pub shrink: f64,
    /// Keep the mesh invariant under `y -> -y`.
    pub symmetric: bool,
}

impl ModelSurfaceSpec {
    pub const DEFAULT_RESOLUTION: usize = 64;
    pub const MIN_RESOLUTION: usize = 12;
    pub const DEFAULT_SHRINK: f64 = 0.35;

    pub fn new(tree: Tree, genus: usize) -> Self {
        ModelSurfaceSpec {
            tree,
            genus,
            root_vertex: None,
            resolution: Self::DEFAULT_RESOLUTION,
            shrink: Self::DEFAULT_SHRINK,
            symmetric: true,
        }
    }

    pub fn with_root(mut self, root: usize) -> Self {
        self.root_vertex = Some(root);
        self
    }

    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_shrink(mut self, shrink: f64) -> Self {
        self.shrink = shrink;
        self
    }

    pub fn with_symmetric(mut self, symmetric: bool) -> Self {
        self.symmetric = symmetric;
        self
    }

    /// The root vertex actually used.
    pub fn root(&self) -> usize {
        self.root_vertex.unwrap_or_else(|| self.tree.centers()[0])
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.tree.vertex_count();
        if let Some(r) = self.root_vertex {
            if r >= n {
                return Err(ModelError::InvalidSpec(format!(
                    "root vertex {r} out of range for {n} vertices"
                )));
            }
        }
        if self.resolution < Self::MIN_RESOLUTION {
            return Err(ModelError::InvalidSpec(format!(
                "resolution {} is below {}",
                self.resolution,
                Self::MIN_RESOLUTION
            )));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(ModelError::InvalidSpec(format!(
                "shrink {} is not in (0, 1)",
                self.shrink
            )));
        }
        Ok(())
    }
}

/// A generated surface together with the data needed to describe it.
#[derive(Debug, Clone)]
pub struct ModelSurface {
    pub mesh: TriMesh,
    pub layout: Layout,
    /// Ball holding the handles, if any.
    pub site: Option<GenusSite>,
    pub spec: ModelSurfaceSpec,
}

#[derive(Serialize, Deserialize)]
struct SpecRecord {
    tree: String,
    edges: Vec<(usize, usize)>,
    genus: usize,
    root_vertex: usize,
    resolution: usize,
    shrink: f64,
    symmetric: bool,
}

#[derive(Serialize, Deserialize)]
struct PlaneRecord {
    normal: [f64; 3],
    offset: f64,
}

#[derive(Serialize, Deserialize)]
struct Counts {
    vertices: usize,
    triangles: usize,
    boundary_loops: usize,
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    schema: String,
    spec: SpecRecord,
    features: Vec<Feature>,
    genus_site: Option<GenusSite>,
    symmetry_plane: Option<PlaneRecord>,
    counts: Counts,
}

impl ModelSurface {
    /// Companion JSON document: spec, features, handle site, plane of
    /// symmetry and mesh counts.
    pub fn sidecar_json(&self) -> String {
        let spec = &self.spec;
        let doc = Sidecar {
            schema: SCHEMA.into(),
            spec: SpecRecord {
                tree: ahu_code(&spec.tree).as_str().into(),
                edges: spec.tree.edges().to_vec(),
                genus: spec.genus,
                root_vertex: self.layout.root,
                resolution: spec.resolution,
                shrink: spec.shrink,
                symmetric: spec.symmetric,
            },
            features: self.layout.features.clone(),
            genus_site: self.site,
            symmetry_plane: spec.symmetric.then_some(PlaneRecord {
                normal: [0.0, 1.0, 0.0],
                offset: 0.0,
            }),
            counts: Counts {
                vertices: self.mesh.vertex_count(),
                triangles: self.mesh.triangle_count(),
                boundary_loops: self.mesh.boundary_loops().map(|l| l.len()).unwrap_or(0),
            },
        };
        serde_json::to_string_pretty(&doc).expect("sidecar serializes")
    }
}

/// Handle site on the central sphere: centered on the equator midway
/// between the first two bridges, and well clear of both.
fn sphere_site(layout: &Layout) -> SphereSite {
    let root = layout.feature(layout.root);
    let k = root.children.len();
    if k == 0 {
        return SphereSite {
            direction: xz_direction(0.0),
            angle: 0.5,
        };
    }
    let half_gap = std::f64::consts::PI / k as f64;
    let rho = layout.feature(root.children[0]).bridge_radius;
    SphereSite {
        direction: xz_direction(half_gap),
        angle: (0.4 * (half_gap - (rho / SPHERE_RADIUS).asin())).min(0.5),
    }
}

/// Generates the model surface together with its layout.
pub fn generate_model(spec: &ModelSurfaceSpec) -> Result<ModelSurface, ModelError> {
    spec.validate()?;
    let layout = Layout::new(&spec.tree, spec.root(), spec.shrink)?;
    let sphere_site = (spec.genus > 0).then(|| sphere_site(&layout));
    let b = build_surface(&layout, spec.resolution, spec.symmetric, sphere_site.as_ref())?;
    let mut mesh = TriMesh::new(b.vertices, b.triangles)?;
    mesh.orient_consistently()?;
    let site = sphere_site.map(|s| GenusSite {
        center: s.direction * SPHERE_RADIUS,
        radius: 2.0 * SPHERE_RADIUS * (s.angle / 2.0).sin(),
    });
    if let Some(site) = &site {
        mesh = attach_genus_with(&mesh, spec.genus, site, spec.resolution)?;
    }
    Ok(ModelSurface {
        mesh,
        layout,
        site,
        spec: spec.clone(),
    })
}

/// Generates the model surface mesh for a tree and genus.
pub fn generate_model_surface(spec: &ModelSurfaceSpec) -> Result<TriMesh, ModelError> {
    generate_model(spec).map(|m| m.mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use crate::tree::parse_tree;

    fn spec(text: &str, g: usize) -> ModelSurfaceSpec {
        ModelSurfaceSpec::new(parse_tree(text).unwrap(), g).with_resolution(32)
    }

    fn check(m: &TriMesh, g: usize, b: usize) {
        assert_eq!(m.component_count(), 1);
        assert!(m.is_consistently_oriented());
        let loops = m.boundary_loops().unwrap();
        assert_eq!(loops.len(), b);
        assert_eq!(m.euler_characteristic(), 2 - 2 * g as i64 - b as i64);
        let on_boundary = m.boundary_vertex_mask();
        for (v, p) in m.vertices().iter().enumerate() {
            if on_boundary[v] {
                assert!((p.norm() - 1.0).abs() < 1e-9);
            } else {
                assert!(p.norm() < 1.0 - 1e-6);
            }
        }
    }

    #[test]
    fn single_edge_gives_a_disc() {
        let m = generate_model_surface(&spec("(())", 0)).unwrap();
        check(&m, 0, 1);
    }

    #[test]
    fn star_and_path_with_handles() {
        check(&generate_model_surface(&spec("(()()())", 0)).unwrap(), 0, 3);
        check(&generate_model_surface(&spec("(((())))", 2)).unwrap(), 2, 3);
        check(&generate_model_surface(&spec("()", 1)).unwrap(), 1, 0);
    }

    #[test]
    fn symmetric_and_deterministic() {
        let s = spec("((())())", 1);
        let a = generate_model_surface(&s).unwrap();
        let b = generate_model_surface(&s).unwrap();
        assert_eq!(a, b);
        for p in a.vertices() {
            let m = Vec3::new(p.x, -p.y, p.z);
            assert!(
                a.vertices().iter().any(|q| (q - m).norm() < 1e-9),
                "{p:?} has no mirror image"
            );
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(matches!(
            generate_model_surface(&spec("(())", 0).with_resolution(8)),
            Err(ModelError::InvalidSpec(_))
        ));
        assert!(matches!(
            generate_model_surface(&spec("(())", 0).with_root(5)),
            Err(ModelError::InvalidSpec(_))
        ));
    }

    #[test]
    fn sidecar_records_the_spec() {
        let m = generate_model(&spec("(()())", 1)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&m.sidecar_json()).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["spec"]["genus"], 1);
        assert_eq!(v["features"].as_array().unwrap().len(), 3);
        assert_eq!(v["symmetry_plane"]["normal"][1], 1.0);
    }
}
