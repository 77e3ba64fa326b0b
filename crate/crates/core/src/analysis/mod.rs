//! Topological invariants of properly embedded surfaces in a ball.
//!
//! Genus and boundary graph together form the [`Signature`]. For free
//! boundary minimal surfaces and strong Heegaard splittings of the ball, two
//! surfaces are isotopic exactly when their signatures agree. For arbitrary
//! meshes equal signatures are only a necessary condition.

mod embedding;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use embedding::{
    intersecting_pairs, self_intersects, validate_properly_embedded, Margins, OffendingItem, OffenseKind,
    ValidationReport,
};

use crate::arrangement::{sphere_boundary_graph_seeded, ArrangementError, SphericalLoop, DEFAULT_SEED};
use crate::mesh::{MeshError, TriMesh};
use crate::tree::{ahu_code, CanonicalCode, Tree};

/// Caveat attached to every isotopy verdict.
pub const HYPOTHESIS_NOTE: &str = "equal signatures decide the isotopy class only for free boundary minimal \
surfaces and strong Heegaard splittings of the ball; for other surfaces they are a necessary condition only";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("the mesh is not properly embedded: {0}")]
    NotProperlyEmbedded(String),
    #[error("euler characteristic {chi} with {boundary} boundary loops is not that of an orientable surface")]
    InconsistentTopology { chi: i64, boundary: usize },
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("invalid signature text: {0}")]
    SignatureSyntax(String),
    #[error("ball radius must be positive and finite, got {0}")]
    BallRadius(f64),
}

/// Closed ball of the given radius about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallDomain {
    radius: f64,
}

impl BallDomain {
    pub fn new(radius: f64) -> Result<Self, AnalysisError> {
        if radius > 0.0 && radius.is_finite() {
            Ok(BallDomain { radius })
        } else {
            Err(AnalysisError::BallRadius(radius))
        }
    }

    pub fn unit() -> Self {
        BallDomain { radius: 1.0 }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl Default for BallDomain {
    fn default() -> Self {
        Self::unit()
    }
}

/// `(genus, number of boundary loops)` of a connected orientable manifold
/// mesh, from `chi = 2 - 2 genus - b`.
pub fn genus_and_boundary(m: &TriMesh) -> Result<(usize, usize), AnalysisError> {
    m.check_edge_manifold()?;
    if let Some(&v) = m.non_manifold_vertices().first() {
        return Err(MeshError::NonManifoldVertex(v).into());
    }
    let components = m.component_count();
    if components != 1 {
        return Err(MeshError::Disconnected(components).into());
    }
    if !m.is_orientable() {
        return Err(MeshError::NonOrientable.into());
    }
    let b = m.boundary_loops()?.len();
    let chi = m.euler_characteristic();
    let twice_genus = 2 - chi - b as i64;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(AnalysisError::InconsistentTopology { chi, boundary: b });
    }
    Ok(((twice_genus / 2) as usize, b))
}

/// Boundary graph of a properly embedded surface: its boundary loops,
/// projected radially to the unit sphere, cut the sphere into regions.
pub fn boundary_graph_of_surface(m: &TriMesh, ball: &BallDomain) -> Result<Tree, AnalysisError> {
    boundary_graph_of_surface_seeded(m, ball, DEFAULT_SEED)
}

/// [`boundary_graph_of_surface`] with an explicit seed for the reference
/// point of the nesting test.
pub fn boundary_graph_of_surface_seeded(m: &TriMesh, ball: &BallDomain, seed: u64) -> Result<Tree, AnalysisError> {
    validate_properly_embedded(m, ball).require()?;
    boundary_tree(m, seed)
}

fn boundary_tree(m: &TriMesh, seed: u64) -> Result<Tree, AnalysisError> {
    let loops: Vec<SphericalLoop> = m
        .boundary_loops()?
        .iter()
        .map(|l| SphericalLoop::projected(l.iter().map(|&v| m.vertices()[v])))
        .collect();
    Ok(sphere_boundary_graph_seeded(&loops, seed)?)
}

/// Genus and canonical boundary tree. Written as `g=<genus>;tree=<code>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub genus: usize,
    pub boundary_tree: CanonicalCode,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={};tree={}", self.genus, self.boundary_tree)
    }
}

impl FromStr for Signature {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AnalysisError::SignatureSyntax(s.to_string());
        let (g, tree) = s.split_once(';').ok_or_else(bad)?;
        let genus = g.strip_prefix("g=").and_then(|g| g.parse().ok()).ok_or_else(bad)?;
        let boundary_tree = tree
            .strip_prefix("tree=")
            .and_then(|t| t.parse().ok())
            .ok_or_else(bad)?;
        Ok(Signature { genus, boundary_tree })
    }
}

pub fn isotopy_signature(m: &TriMesh, ball: &BallDomain) -> Result<Signature, AnalysisError> {
    isotopy_signature_seeded(m, ball, DEFAULT_SEED)
}

pub fn isotopy_signature_seeded(m: &TriMesh, ball: &BallDomain, seed: u64) -> Result<Signature, AnalysisError> {
    validate_properly_embedded(m, ball).require()?;
    let (genus, _) = genus_and_boundary(m)?;
    let tree = boundary_tree(m, seed)?;
    Ok(Signature {
        genus,
        boundary_tree: ahu_code(&tree),
    })
}

/// Outcome of comparing two surfaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotopyReport {
    pub equivalent: bool,
    pub first: Signature,
    pub second: Signature,
    pub note: String,
}

pub fn isotopy_report(a: &TriMesh, b: &TriMesh, ball: &BallDomain) -> Result<IsotopyReport, AnalysisError> {
    let first = isotopy_signature(a, ball)?;
    let second = isotopy_signature(b, ball)?;
    Ok(IsotopyReport {
        equivalent: first == second,
        first,
        second,
        note: HYPOTHESIS_NOTE.to_string(),
    })
}

/// True iff the signatures agree; see [`HYPOTHESIS_NOTE`] for what that
/// implies.
pub fn isotopy_equivalent(a: &TriMesh, b: &TriMesh, ball: &BallDomain) -> Result<bool, AnalysisError> {
    Ok(isotopy_report(a, b, ball)?.equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use crate::mesh::primitives;
    use crate::model::{generate_model_surface, ModelSurfaceSpec};
    use crate::tree::parse_tree;

    fn model(text: &str, g: usize) -> TriMesh {
        generate_model_surface(&ModelSurfaceSpec::new(parse_tree(text).unwrap(), g).with_resolution(24)).unwrap()
    }

    #[test]
    fn disc_and_annulus_topology() {
        assert_eq!(genus_and_boundary(&primitives::flat_disc(1.0, 4, 16)).unwrap(), (0, 1));
        assert_eq!(
            genus_and_boundary(&primitives::annulus(0.5, 1.0, 3, 16)).unwrap(),
            (0, 2)
        );
        assert_eq!(genus_and_boundary(&primitives::torus(1.0, 0.3, 16, 8)).unwrap(), (1, 0));
    }

    #[test]
    fn disconnected_meshes_have_no_genus() {
        let mut m = primitives::icosphere(1.0, 1);
        m.append(&primitives::icosphere(1.0, 1).map_vertices(|p| p + Vec3::x() * 3.0));
        assert!(matches!(
            genus_and_boundary(&m),
            Err(AnalysisError::Mesh(MeshError::Disconnected(2)))
        ));
    }

    #[test]
    fn flat_disc_is_embedded_and_has_p2_signature() {
        let disc = primitives::flat_disc(1.0, 6, 32);
        assert!(!self_intersects(&disc));
        let report = validate_properly_embedded(&disc, &BallDomain::unit());
        assert!(report.properly_embedded, "{report:?}");
        let sig = isotopy_signature(&disc, &BallDomain::unit()).unwrap();
        assert_eq!(sig.to_string(), "g=0;tree=(())");
    }

    #[test]
    fn overlapping_spheres_intersect() {
        let mut m = primitives::icosphere(1.0, 2);
        m.append(&primitives::icosphere(1.0, 2).map_vertices(|p| p + Vec3::x()));
        assert!(self_intersects(&m));
        assert!(!intersecting_pairs(&m).is_empty());
    }

    #[test]
    fn displaced_disc_is_reported() {
        let disc = primitives::flat_disc(1.0, 6, 32).map_vertices(|p| p + Vec3::x() * 0.1);
        let report = validate_properly_embedded(&disc, &BallDomain::unit());
        assert!(!report.properly_embedded);
        assert!(report
            .offending_items
            .iter()
            .any(|i| i.kind == OffenseKind::BoundaryOffSphere && !i.indices.is_empty()));
    }

    #[test]
    fn interior_vertex_on_the_sphere_is_reported() {
        let disc = primitives::flat_disc(1.0, 6, 32);
        let centre = disc.vertices().iter().position(|p| p.norm() < 1e-12).unwrap();
        let lifted = disc.map_vertices(|p| if p.norm() < 1e-12 { Vec3::z() } else { *p });
        let report = validate_properly_embedded(&lifted, &BallDomain::unit());
        assert!(!report.properly_embedded);
        let item = report
            .offending_items
            .iter()
            .find(|i| i.kind == OffenseKind::InteriorNotInside)
            .unwrap();
        assert_eq!(item.indices, vec![centre]);
    }

    #[test]
    fn model_signatures() {
        let star = model("(()()())", 0);
        let path = model("(((())))", 2);
        assert_eq!(genus_and_boundary(&path).unwrap(), (2, 3));
        let ball = BallDomain::unit();
        let sig = isotopy_signature(&path, &ball).unwrap();
        assert_eq!(sig.genus, 2);
        assert_eq!(sig.boundary_tree, ahu_code(&Tree::path(4)));
        let path0 = model("(((())))", 0);
        assert!(!isotopy_equivalent(&star, &path0, &ball).unwrap());
        let relabelled = model("(()(()))", 0);
        assert!(isotopy_equivalent(&path0, &relabelled, &ball).unwrap());
    }

    #[test]
    fn signature_text_round_trips() {
        let s: Signature = "g=3;tree=(()())".parse().unwrap();
        assert_eq!(s.genus, 3);
        assert_eq!(s.to_string().parse::<Signature>().unwrap(), s);
        assert!("g=x;tree=()".parse::<Signature>().is_err());
        assert!("tree=()".parse::<Signature>().is_err());
    }
}
