//! Boundary graphs, model surfaces and isotopy signatures for surfaces
//! properly embedded in a ball.
//!
//! - [`tree`]: trees, multigraphs, canonical codes and enumeration.
//! - [`arrangement`]: boundary graphs of curves on meshes and on the sphere.
//! - [`model`]: model surfaces for a given tree and genus.
//! - [`analysis`]: embedding checks, genus and signatures.
//! - [`shrinker`]: graphs at infinity of non-compact ends.
//! - [`mesh`] and [`geom`]: triangle meshes and the geometry beneath them.
//!
//! ```
//! use unknot_kit::analysis::{isotopy_signature, BallDomain};
//! use unknot_kit::model::{generate_model_surface, ModelSurfaceSpec};
//! use unknot_kit::tree::Tree;
//!
//! let mesh = generate_model_surface(&ModelSurfaceSpec::new(Tree::path(3), 2).with_resolution(12)).unwrap();
//! let sig = isotopy_signature(&mesh, &BallDomain::unit()).unwrap();
//! assert_eq!(sig.to_string(), "g=2;tree=(()())");
//! ```

pub mod analysis;
pub mod arrangement;
pub mod geom;
pub mod mesh;
pub mod model;
pub mod shrinker;
pub mod tree;

// The guide's snippets run as doc-tests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/boundary-graphs.md")]
    mod boundary_graphs {}
    #[doc = include_str!("../../../book/src/model-surfaces.md")]
    mod model_surfaces {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/shrinkers.md")]
    mod shrinkers {}
}
