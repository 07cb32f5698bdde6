//! Closed polygonal curves in R^d, coordinate projections and general-position
//! conditioning.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::geometry::{Intersection, Point, ScalarKey, Segment};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum CurveError {
    #[error("a closed curve needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("ambient dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("vertex {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("axis {axis} is out of range for dimension {dimension}")]
    AxisOutOfRange { axis: usize, dimension: usize },
    #[error("curve is not simple")]
    NotSimple,
    #[error("perturbation budget must be positive when the curve is not already generic")]
    EmptyBudget,
    #[error("no perturbation within the budget keeps the curve simple (blocked by segments {0} and {1})")]
    SimplicityBlocked(usize, usize),
    #[error("no perturbation within the budget separates the coordinate value of vertex {0}")]
    DistinctnessBlocked(usize),
    #[error("matrix must be {expected}x{expected}")]
    BadMatrix { expected: usize },
}

/// A coordinate axis. Stored 0-based; displayed 1-based like the usual `x_1, ..., x_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axis(usize);

impl Axis {
    pub fn new(index: usize) -> Self {
        Axis(index)
    }

    /// `Axis::one_based(1)` is the first coordinate.
    pub fn one_based(i: usize) -> Option<Self> {
        i.checked_sub(1).map(Axis)
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn all(dimension: usize) -> impl Iterator<Item = Axis> {
        (0..dimension).map(Axis)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

/// A closed polygonal curve: consecutive vertices are joined by straight
/// segments and the last vertex is joined to the first.
///
/// Construction enforces the structural invariants (at least three vertices,
/// consistent dimension, distinct consecutive vertices). Simplicity is a
/// separate, exact check: [`validate_simple`].
#[derive(Clone, Debug, PartialEq)]
pub struct PlCurve<S> {
    dimension: usize,
    vertices: Vec<Point<S>>,
}

impl<S: Scalar> PlCurve<S> {
    pub fn new(vertices: Vec<Point<S>>) -> Result<Self, CurveError> {
        let n = vertices.len();
        if n < 3 {
            return Err(CurveError::TooFewVertices(n));
        }
        let dimension = vertices[0].dim();
        if dimension < 2 {
            return Err(CurveError::DimensionTooSmall(dimension));
        }
        for (index, v) in vertices.iter().enumerate() {
            if v.dim() != dimension {
                return Err(CurveError::DimensionMismatch { index, expected: dimension, found: v.dim() });
            }
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if vertices[i].approx_eq(&vertices[j]) {
                return Err(CurveError::RepeatedVertex(i, j));
            }
        }
        Ok(PlCurve { dimension, vertices })
    }

    /// Builds the curve and additionally requires it to be simple.
    pub fn simple(vertices: Vec<Point<S>>) -> Result<Self, CurveError> {
        let curve = Self::new(vertices)?;
        if validate_simple(&curve) {
            Ok(curve)
        } else {
            Err(CurveError::NotSimple)
        }
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Result<Self, CurveError> {
        Self::new(rows.iter().map(|r| Point::from_i64s(r)).collect())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[Point<S>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn segment(&self, i: usize) -> Segment<S> {
        let n = self.len();
        Segment::new(self.vertices[i % n].clone(), self.vertices[(i + 1) % n].clone())
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment<S>> + '_ {
        (0..self.len()).map(move |i| self.segment(i))
    }

    pub fn check_axis(&self, axis: Axis) -> Result<(), CurveError> {
        if axis.index() < self.dimension {
            Ok(())
        } else {
            Err(CurveError::AxisOutOfRange { axis: axis.index() + 1, dimension: self.dimension })
        }
    }

    /// Point at curve parameter `u`: `floor(u)` selects the segment (mod n),
    /// the fractional part the position along it.
    pub fn point_at(&self, u: &S) -> Point<S> {
        let n = S::from_i64(self.len() as i64);
        let u = u.clone() - (u.clone() / n.clone()).floor() * n;
        let j = u.floor();
        let idx = j.as_i64().unwrap_or(0) as usize;
        self.segment(idx).at(&(u - j))
    }

    /// Applies the linear map `x -> M x`. Used to turn projections along
    /// arbitrary independent directions into coordinate projections.
    pub fn transform(&self, matrix: &[Vec<S>]) -> Result<Self, CurveError> {
        let d = self.dimension;
        if matrix.len() != d || matrix.iter().any(|row| row.len() != d) {
            return Err(CurveError::BadMatrix { expected: d });
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| Point::new(matrix.iter().map(|row| crate::geometry::dot(row, v.coords())).collect()))
            .collect();
        Self::new(vertices)
    }

    /// Inserts the midpoint of segment `i` as a new vertex.
    pub fn subdivide(&self, i: usize) -> Self {
        let mid = self.segment(i).at(&S::half());
        let mut vertices = self.vertices.clone();
        vertices.insert(i + 1, mid);
        PlCurve { dimension: self.dimension, vertices }
    }
}

/// Exact simplicity test: non-adjacent segments are disjoint and adjacent
/// segments share only their common vertex.
pub fn validate_simple<S: Scalar>(curve: &PlCurve<S>) -> bool {
    first_conflict(curve.vertices()).is_none()
}

/// The first pair of segments violating simplicity, if any.
pub(crate) fn first_conflict<S: Scalar>(vertices: &[Point<S>]) -> Option<(usize, usize)> {
    let n = vertices.len();
    let segs: Vec<Segment<S>> =
        (0..n).map(|i| Segment::new(vertices[i].clone(), vertices[(i + 1) % n].clone())).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let hit = segs[i].intersect(&segs[j]);
            let ok = if j == i + 1 {
                matches!(&hit, Intersection::Point { s, t } if s.is_one() && t.is_zero())
            } else if i == 0 && j == n - 1 {
                matches!(&hit, Intersection::Point { s, t } if s.is_zero() && t.is_one())
            } else {
                hit == Intersection::Disjoint
            };
            if !ok {
                return Some((i, j));
            }
        }
    }
    None
}

/// Images of the curve's segments under deletion of coordinate `axis`, in
/// segment order. Segments parallel to the axis become zero-length segments.
pub fn project<S: Scalar>(curve: &PlCurve<S>, axis: Axis) -> Result<Vec<Segment<S>>, CurveError> {
    curve.check_axis(axis)?;
    Ok(curve.segments().map(|s| Segment::new(s.start.without(axis.index()), s.end.without(axis.index()))).collect())
}

/// Genericity conditions achievable by bounded perturbation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Genericity {
    /// All vertices have pairwise distinct values in this coordinate.
    DistinctCoordinate(Axis),
}

impl Genericity {
    pub fn holds<S: Scalar>(&self, curve: &PlCurve<S>) -> bool {
        match *self {
            Genericity::DistinctCoordinate(axis) => {
                let mut seen = BTreeSet::new();
                curve.vertices().iter().all(|v| seen.insert(ScalarKey(v.coord(axis.index()).clone())))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralPositionReport<S> {
    pub curve: PlCurve<S>,
    pub perturbation_applied: bool,
    /// Max-norm distance between corresponding vertices.
    pub max_displacement: S,
}

/// Picks offsets in `candidates(step)` for each value so the results are
/// pairwise distinct, keep `pinned` values fixed and satisfy `admissible`.
///
/// Offsets are tried in the order `0, +h, -h, +2h, -2h, ...` up to `budget`,
/// with `h = budget / (count + 1)`, so the result depends only on the input
/// order and is reproducible.
pub(crate) fn distinct_offsets<S: Scalar>(
    values: &[S],
    pinned: &[bool],
    budget: &S,
    admissible: impl Fn(&S) -> bool,
) -> Result<Vec<S>, usize> {
    let count = values.len();
    let steps = count as i64 + 1;
    let h = budget.clone() / S::from_i64(steps);
    let mut taken: BTreeSet<ScalarKey<S>> = BTreeSet::new();
    for (v, &p) in values.iter().zip(pinned) {
        if p {
            taken.insert(ScalarKey(v.clone()));
        }
    }
    let mut out = vec![S::zero(); count];
    for (i, v) in values.iter().enumerate() {
        if pinned[i] {
            continue;
        }
        let mut chosen = None;
        for j in 0..=steps {
            let magnitude = h.clone() * S::from_i64(j);
            let tries = if j == 0 { vec![S::zero()] } else { vec![magnitude.clone(), -magnitude] };
            for off in tries {
                if budget.is_negligible() && !off.is_zero() {
                    continue;
                }
                let candidate = v.clone() + off.clone();
                if admissible(&candidate) && !taken.contains(&ScalarKey(candidate.clone())) {
                    chosen = Some((off, candidate));
                    break;
                }
            }
            if chosen.is_some() {
                break;
            }
        }
        let (off, candidate) = chosen.ok_or(i)?;
        taken.insert(ScalarKey(candidate));
        out[i] = off;
    }
    Ok(out)
}

/// Moves vertices along the constrained coordinate, by at most `budget` in
/// max-norm, until `predicate` holds while keeping the curve simple.
///
/// The offsets are derived from vertex order only. If the first assignment
/// breaks simplicity the step is halved, up to a fixed number of rounds.
pub fn perturb_general_position<S: Scalar>(
    curve: &PlCurve<S>,
    predicate: Genericity,
    budget: &S,
) -> Result<GeneralPositionReport<S>, CurveError> {
    if predicate.holds(curve) {
        return Ok(GeneralPositionReport {
            curve: curve.clone(),
            perturbation_applied: false,
            max_displacement: S::zero(),
        });
    }
    if !budget.is_positive() {
        return Err(CurveError::EmptyBudget);
    }
    let Genericity::DistinctCoordinate(axis) = predicate;
    curve.check_axis(axis)?;
    let values: Vec<S> = curve.vertices().iter().map(|v| v.coord(axis.index()).clone()).collect();
    let pinned = vec![false; values.len()];
    let mut scale = budget.clone();
    let mut blocked = (0, 0);
    for _ in 0..24 {
        let offsets = distinct_offsets(&values, &pinned, &scale, |_| true).map_err(CurveError::DistinctnessBlocked)?;
        let vertices: Vec<Point<S>> = curve
            .vertices()
            .iter()
            .zip(&offsets)
            .map(|(v, off)| {
                let mut c = v.coords().to_vec();
                c[axis.index()] = c[axis.index()].clone() + off.clone();
                Point::new(c)
            })
            .collect();
        match first_conflict(&vertices) {
            None => {
                let max_displacement = offsets.iter().fold(S::zero(), |m, o| S::max_of(m, o.abs()));
                return Ok(GeneralPositionReport {
                    curve: PlCurve { dimension: curve.dimension, vertices },
                    perturbation_applied: true,
                    max_displacement,
                });
            }
            Some(pair) => blocked = pair,
        }
        scale = scale / S::from_i64(2);
    }
    Err(CurveError::SimplicityBlocked(blocked.0, blocked.1))
}
