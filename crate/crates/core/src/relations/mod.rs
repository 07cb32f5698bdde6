//! Relations on a closed curve induced by its path-shaped shadows.
//!
//! For an axis whose shadow is a simple path, two points of the curve are
//! related when they project to (nearly) the same point of the path. The
//! submodules build these relations as curves on the torus, compose them,
//! and extract fixed points of the composite.

mod compose;
mod flip;
mod psi;
mod split;
mod triple;
mod witness;

use thiserror::Error;

use crate::circle::CircleMapError;
use crate::complex::{ShadowError, TopologyTag};
use crate::curve::{Axis, CurveError};
use crate::fiber::FiberError;

pub use compose::{compose_relation_curves, compose_relation_curves_with, ComposeOptions, Composition};
pub use flip::flip_map_demo;
pub use psi::{build_relation_curve, RelationCurve};
pub use split::{split_top_bottom, unravel, ShadowSplit, Unraveled};
pub use triple::{
    find_triple_fixed_point, fixed_point_of_triple, ChainPoint, FixedPointCertificate, Residual, TripleChain,
};
pub use witness::{endpoint_witness_check, ContradictionTrace, WitnessReport};

#[derive(Debug, Error, PartialEq)]
pub enum RelationError {
    #[error(transparent)]
    Shadow(#[from] ShadowError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    CircleMap(#[from] CircleMapError),
    #[error("shadow along axis {axis} is {found}, not a simple path")]
    NotAPath { axis: Axis, found: TopologyTag },
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("epsilon too small: no admissible offset of size at most epsilon/2 separates vertex {vertex}")]
    EpsilonTooSmall { vertex: usize },
    #[error("perturbation budget must lie strictly between 0 and 1/4")]
    BadBudget,
    #[error("middle degrees must both be odd, got {b1} and {b2}")]
    EvenMiddleDegree { b1: i64, b2: i64 },
    #[error("projection along axis {axis} is not exactly 2-to-1 over the interior of its shadow")]
    NotTwoToOne { axis: Axis },
    #[error("need at least 3 coordinates, got {0}")]
    TooFewAxes(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl RelationError {
    /// True for errors that can only come from a defect in this crate.
    pub fn is_internal(&self) -> bool {
        matches!(self, RelationError::Internal(_) | RelationError::Shadow(ShadowError::PathBoundViolation { .. }))
    }
}
