//! Fixture curves: rational polygons on the unit circle, a curve whose three
//! shadows are all trees, and seeded random polygons.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::curve::{validate_simple, CurveError, PlCurve};
use crate::geometry::Point;
use crate::scalar::Scalar;

/// Draws attempted before [`gen_random_knot`] gives up.
pub const MAX_ATTEMPTS: usize = 1000;

/// Denominator of the rounded half-angle tangents and random coordinates.
const GRID: i64 = 1024;

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("need at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },
    #[error("need dimension at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("no simple curve after {0} draws")]
    Exhausted(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    PlanarCircle,
    TreeShadow,
    RandomKnot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub dimension: usize,
    pub resolution: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn generate<S: Scalar>(&self) -> Result<PlCurve<S>, GeneratorError> {
        match self.kind {
            GeneratorKind::PlanarCircle => gen_planar_circle(self.dimension, self.resolution),
            GeneratorKind::TreeShadow => {
                if self.dimension != 3 {
                    return Err(GeneratorError::DimensionTooSmall { min: 3, got: self.dimension });
                }
                Ok(gen_tree_shadow_curve())
            }
            GeneratorKind::RandomKnot => gen_random_knot(self.dimension, self.resolution, self.seed),
        }
    }
}

/// Rational point of the unit circle at angle about `theta`: the half-angle
/// tangent is rounded to a multiple of `1/GRID`, then mapped exactly by
/// `t -> ((1 - t²)/(1 + t²), 2t/(1 + t²))`.
fn circle_point<S: Scalar>(theta: f64) -> (S, S) {
    let half = theta / 2.0;
    if (half - PI / 2.0).abs() < 1e-12 {
        return (S::from_i64(-1), S::zero());
    }
    let m = (half.tan() * GRID as f64).round() as i64;
    let g2 = GRID * GRID;
    let den = g2 + m * m;
    (S::ratio(g2 - m * m, den), S::ratio(2 * m * GRID, den))
}

/// An `n`-gon inscribed in the unit circle of the `x1 x2`-plane of `R^d`,
/// with exact rational vertices.
///
/// Vertex `k` sits near angle `2π(k + 1/3)/n`; the offset keeps vertices
/// away from the coordinate axes so no edge is parallel to one.
pub fn gen_planar_circle<S: Scalar>(d: usize, n: usize) -> Result<PlCurve<S>, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::TooFewVertices { min: 3, got: n });
    }
    if d < 2 {
        return Err(GeneratorError::DimensionTooSmall { min: 2, got: d });
    }
    let vertices = (0..n)
        .map(|k| {
            let theta = 2.0 * PI * (k as f64 + 1.0 / 3.0) / n as f64;
            let (x, y) = circle_point::<S>(theta);
            let mut coords = vec![S::zero(); d];
            coords[0] = x;
            coords[1] = y;
            Point::new(coords)
        })
        .collect();
    Ok(PlCurve::simple(vertices)?)
}

/// Lattice walk in `{-1, 0, 1}^3` whose three coordinate shadows are trees.
const TREE_WALK: [[i64; 3]; 24] = [
    [0, 0, 0],
    [0, 0, 1],
    [0, 0, 2],
    [1, 0, 2],
    [1, 0, 1],
    [1, 1, 1],
    [2, 1, 1],
    [2, 0, 1],
    [2, 0, 0],
    [2, 1, 0],
    [2, 2, 0],
    [2, 2, 1],
    [1, 2, 1],
    [1, 2, 2],
    [2, 2, 2],
    [2, 1, 2],
    [1, 1, 2],
    [0, 1, 2],
    [0, 2, 2],
    [0, 2, 1],
    [0, 2, 0],
    [0, 1, 0],
    [1, 1, 0],
    [1, 0, 0],
];

/// A simple closed curve in `R^3` all of whose coordinate shadows are trees.
///
/// The curve is a closed walk on the unit lattice of a 3×3×3 cube, centred
/// at the origin. It was found by search and is certified by the classifier
/// in the tests.
pub fn gen_tree_shadow_curve<S: Scalar>() -> PlCurve<S> {
    let vertices = TREE_WALK.iter().map(|p| Point::from_i64s(&[p[0] - 1, p[1] - 1, p[2] - 1])).collect();
    PlCurve::new(vertices).expect("fixed walk has distinct consecutive vertices")
}

/// A seeded random simple polygon with `n` vertices in `[-1, 1]^d`.
///
/// Coordinates are multiples of `1/1024`; draws repeat until the polygon is
/// simple, up to [`MAX_ATTEMPTS`]. Equal seeds give equal curves.
pub fn gen_random_knot<S: Scalar>(d: usize, n: usize, seed: u64) -> Result<PlCurve<S>, GeneratorError> {
    if d < 3 {
        return Err(GeneratorError::DimensionTooSmall { min: 3, got: d });
    }
    if n < 4 {
        return Err(GeneratorError::TooFewVertices { min: 4, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let vertices: Vec<Point<S>> =
            (0..n).map(|_| Point::new((0..d).map(|_| S::ratio(rng.gen_range(-GRID..=GRID), GRID)).collect())).collect();
        if let Ok(curve) = PlCurve::new(vertices) {
            if validate_simple(&curve) {
                return Ok(curve);
            }
        }
    }
    Err(GeneratorError::Exhausted(MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{shadow_classes, TopologyTag};
    use crate::Rational;

    fn tags(c: &PlCurve<Rational>) -> Vec<TopologyTag> {
        shadow_classes(c).unwrap().iter().map(|c| c.tag()).collect()
    }

    #[test]
    fn planar_hexagon_has_two_path_shadows() {
        use TopologyTag::*;
        let c = gen_planar_circle::<Rational>(3, 6).unwrap();
        assert!(validate_simple(&c));
        assert_eq!(tags(&c), vec![SimplePath, SimplePath, SimpleClosedCurve]);
        let c = gen_planar_circle::<Rational>(4, 8).unwrap();
        assert_eq!(tags(&c), vec![SimplePath, SimplePath, SimpleClosedCurve, SimpleClosedCurve]);
        let c = gen_planar_circle::<Rational>(3, 3).unwrap();
        assert_eq!(tags(&c), vec![SimplePath, SimplePath, SimpleClosedCurve]);
    }

    #[test]
    fn circle_vertices_lie_on_the_unit_circle() {
        let c = gen_planar_circle::<Rational>(2, 7).unwrap();
        for v in c.vertices() {
            let r2 = v.coord(0).clone() * v.coord(0).clone() + v.coord(1).clone() * v.coord(1).clone();
            assert_eq!(r2, Rational::from_i64(1));
        }
        let (x, y) = circle_point::<Rational>(PI);
        assert_eq!((x, y), (Rational::from_i64(-1), Rational::from_i64(0)));
    }

    #[test]
    fn tree_fixture_is_simple_with_three_tree_shadows() {
        let c = gen_tree_shadow_curve::<Rational>();
        assert!(validate_simple(&c));
        assert_eq!(tags(&c), vec![TopologyTag::Tree; 3]);
    }

    #[test]
    fn random_knots_are_simple_and_reproducible() {
        let a = gen_random_knot::<Rational>(3, 12, 1).unwrap();
        assert!(validate_simple(&a));
        assert_eq!(a, gen_random_knot::<Rational>(3, 12, 1).unwrap());
        assert_ne!(a, gen_random_knot::<Rational>(3, 12, 2).unwrap());
        let paths = tags(&a).iter().filter(|t| **t == TopologyTag::SimplePath).count();
        assert!(paths <= 2);
    }

    #[test]
    fn generator_preconditions() {
        assert_eq!(gen_planar_circle::<Rational>(3, 2), Err(GeneratorError::TooFewVertices { min: 3, got: 2 }));
        assert_eq!(gen_random_knot::<Rational>(2, 12, 0), Err(GeneratorError::DimensionTooSmall { min: 3, got: 2 }));
        assert_eq!(gen_random_knot::<Rational>(3, 3, 0), Err(GeneratorError::TooFewVertices { min: 4, got: 3 }));
        let spec = GeneratorSpec { kind: GeneratorKind::TreeShadow, dimension: 4, resolution: 0, seed: 0 };
        assert!(spec.generate::<Rational>().is_err());
    }
}
