//! Coordinate shadows of piecewise-linear closed curves.
//!
//! The crate computes the shadows (coordinate projections) of closed
//! polygonal curves in R^d, decides their homeomorphism type exactly, and
//! provides the topological tools used to show that no simple closed curve
//! has three simple-path shadows: degrees of circle maps, fiber products of
//! mapped graphs, and composition of relations on the circle.
//!
//! Everything is generic over [`Scalar`]. [`Rational`] is the exact
//! instantiation used for all decisions; the `*F64` aliases are provided for
//! previews.

pub mod circle;
pub mod complex;
pub mod curve;
pub mod fiber;
pub mod generators;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod relations;
pub mod scalar;
pub mod svg;
pub mod union_find;

pub use circle::{degree, diagonal_intersections, torus_degree, CircleMapError, PlCircleMap, TorusCurve};
pub use complex::{
    build_image_complex, classify, path_parameterization, shadow_classes, shadow_complex, ImageComplex,
    PathParameterization, ShadowError, TopologyClass, TopologyTag,
};
pub use curve::{
    perturb_general_position, project, validate_simple, Axis, CurveError, GeneralPositionReport, Genericity, PlCurve,
};
pub use fiber::{
    cycle_decomposition, fiber_product, vertex_degree_check, Component, FiberError, FiberProduct, GraphPoint,
    MappedGraph, Target,
};
pub use generators::{
    gen_planar_circle, gen_random_knot, gen_tree_shadow_curve, GeneratorError, GeneratorKind, GeneratorSpec,
};
pub use geometry::{Intersection, Point, Segment};
pub use harness::{run_path_bound_harness, HarnessConfig, HarnessReport};
pub use io::IoError;
pub use relations::{
    build_relation_curve, compose_relation_curves, compose_relation_curves_with, endpoint_witness_check,
    find_triple_fixed_point, fixed_point_of_triple, flip_map_demo, split_top_bottom, unravel, ComposeOptions,
    Composition, FixedPointCertificate, RelationCurve, RelationError, ShadowSplit,
};
pub use scalar::Scalar;

/// Exact rational numbers in lowest terms.
pub type Rational = num_rational::BigRational;

pub type Curve = PlCurve<Rational>;
pub type Complex = ImageComplex<Rational>;
pub type CircleMap = PlCircleMap<Rational>;
pub type Torus = TorusCurve<Rational>;
pub type Graph = MappedGraph<Rational>;

pub type CurveF64 = PlCurve<f64>;
pub type ComplexF64 = ImageComplex<f64>;
pub type CircleMapF64 = PlCircleMap<f64>;
