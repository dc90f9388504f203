//! Constructive shrinking of null, recursively starlike-equivalent
//! decompositions of planar scenes.
//!
//! The crate builds explicit, exactly invertible planar homeomorphisms that
//! squeeze every decomposition element below a target size while moving each
//! point less than that size in the quotient pseudometric, and certifies the
//! result numerically.
//!
//! Layering, bottom up:
//!
//! - [`metric`]: points, sampled compact sets, regions, diameters, nets.
//! - [`homeo`]: the closed catalog of invertible maps and their certification.
//! - [`starlike`]: radius functions, starlike sets and the staged radial squeeze.
//! - [`decomposition`]: saturation, nullity, the contracted quotient graph and
//!   the shrinking-criterion checker.
//! - [`shrink`]: chart conjugation, big-element iteration and the induction on
//!   filtration length.
//! - [`scene`] and [`render`]: the scene file format, reports and SVG frames.

pub mod decomposition;
pub mod error;
pub mod homeo;
pub mod metric;
pub mod par;
pub mod render;
pub mod scene;
pub mod shrink;
pub mod starlike;

pub use decomposition::{
    bing_check, BingReport, Decomposition, Element, QuotientGraph, QuotientPoint, Scene,
};
pub use error::{Error, Result};
pub use homeo::{check_homeo, Affine2, Homeo, HomeoChain, HomeoReport, PlanarMap, RadialStage};
pub use metric::{diameter, epsilon_net, hausdorff, BBox, CompactSample, Point2, Region};
pub use par::Exec;
pub use scene::{parse_scene, run_shrink, LoadedScene, SceneFile, ShrinkReport};
pub use shrink::{
    approximating_sequence, shrink_null_se, shrink_recursive, shrink_se, transport_filtration,
    Chart, RecursiveSet, RseDecomposition, Shrink, StarlikeEquivalentSet,
};
pub use starlike::{radial_squeeze, Member, NullCollection, RadiusFunction, StarlikeSet};
