use crate::circle::{diagonal_intersections, torus_degree, TorusCurve};
use crate::curve::{Axis, PlCurve};
use crate::scalar::Scalar;

use super::compose::{compose_relation_curves, distance_on_circle};
use super::psi::build_relation_curve;
use super::split::split_top_bottom;
use super::RelationError;

/// A fixed point of the composite of three relations, traced back to one
/// point per relation.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleChain<S> {
    /// Parameter of the final curve where it meets the diagonal.
    pub diagonal_parameter: S,
    /// Circle coordinates `c0, c1, c2` with `(c0, c1)`, `(c1, c2)`, `(c2, c0)`
    /// on the three (prepared) relation curves.
    pub circle_points: [S; 3],
    /// Circle distance by which each link misses exactly; only the shift of
    /// shared coordinates during composition contributes.
    pub link_gaps: [S; 3],
    /// Degree of the composite of the first two relations.
    pub inner_degree: (i64, i64),
    pub inner_k: i64,
    /// Degree of the full composite, `(k, -k)`.
    pub degree: (i64, i64),
    pub k: i64,
}

/// Composes three relation curves `X0 -> X1 -> X2 -> X0` and finds a point
/// of the composite on the diagonal.
///
/// Each input must have odd second degree and the next one odd first degree.
pub fn chain_fixed_point<S: Scalar>(psi: &[TorusCurve<S>; 3]) -> Result<TripleChain<S>, RelationError> {
    let inner = compose_relation_curves(&psi[0], &psi[1])?;
    let outer = compose_relation_curves(&inner.curve, &psi[2])?;
    let degree = torus_degree(&outer.curve);
    let t = diagonal_intersections(&outer.curve)
        .into_iter()
        .next()
        .ok_or_else(|| RelationError::Internal(format!("curve of degree {degree:?} misses the diagonal")))?;

    let r_inner = outer.sigma.0.eval(&t);
    let r3 = outer.sigma.1.eval(&t);
    let r1 = inner.sigma.0.eval(&r_inner);
    let r2 = inner.sigma.1.eval(&r_inner);
    let (p1, p2) = (&inner.inputs.0, &inner.inputs.1);
    let (_, p3) = (&outer.inputs.0, &outer.inputs.1);

    let c0 = outer.curve.first().eval(&t);
    let c1 = p1.second().eval(&r1);
    let c2 = p3.first().eval(&r3);
    let gaps = [
        distance_on_circle(&c1, &p2.first().eval(&r2)),
        distance_on_circle(&p2.second().eval(&r2), &c2),
        distance_on_circle(&p3.second().eval(&r3), &c0),
    ];
    Ok(TripleChain {
        diagonal_parameter: t,
        circle_points: [c0, c1, c2],
        link_gaps: gaps,
        inner_degree: torus_degree(&inner.curve),
        inner_k: inner.k,
        degree,
        k: outer.k,
    })
}

/// A point together with its position on the parameter circle.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainPoint<S> {
    pub parameter: S,
    pub coords: Vec<S>,
}

/// `q_{i+1} - q_i` and how far it is from being parallel to its axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual<S> {
    pub axis: Axis,
    pub difference: Vec<S>,
    /// Largest absolute coordinate of `difference` off the axis.
    pub off_axis: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointCertificate<S> {
    pub epsilon: Option<S>,
    pub chain: TripleChain<S>,
    pub points: [ChainPoint<S>; 3],
    pub residuals: Vec<Residual<S>>,
}

impl<S: Scalar> FixedPointCertificate<S> {
    /// Sum of the residual differences; zero for a closed chain.
    pub fn residual_sum(&self) -> Vec<S> {
        let dim = self.residuals.first().map_or(0, |r| r.difference.len());
        (0..dim).map(|i| self.residuals.iter().fold(S::zero(), |acc, r| acc + r.difference[i].clone())).collect()
    }
}

/// Fixed point of a synthetic triple of relation curves, reported on the
/// circle: each point's coordinates are its circle coordinate.
pub fn fixed_point_of_triple<S: Scalar>(psi: &[TorusCurve<S>; 3]) -> Result<FixedPointCertificate<S>, RelationError> {
    let chain = chain_fixed_point(psi)?;
    let points = chain.circle_points.clone().map(|c| ChainPoint { parameter: c.clone(), coords: vec![c] });
    Ok(FixedPointCertificate { epsilon: None, chain, points, residuals: Vec::new() })
}

/// Runs the relation pipeline on the first three shadows of `curve`.
///
/// Requires all three shadows to be simple paths. A simple closed curve never
/// has that property, so on genuine inputs this returns
/// [`RelationError::NotAPath`]; degenerate, non-simple polygons do reach the
/// end and produce a certificate.
pub fn find_triple_fixed_point<S: Scalar>(
    curve: &PlCurve<S>,
    epsilon: &S,
) -> Result<FixedPointCertificate<S>, RelationError> {
    if curve.dimension() < 3 {
        return Err(RelationError::TooFewAxes(curve.dimension()));
    }
    let mut psi = Vec::with_capacity(3);
    for i in 0..3 {
        let split = split_top_bottom(curve, Axis::new(i))?;
        psi.push(build_relation_curve(curve, &split, epsilon)?);
    }
    let tori = [psi[0].curve.clone(), psi[1].curve.clone(), psi[2].curve.clone()];
    let chain = chain_fixed_point(&tori)?;
    let points = chain.circle_points.clone().map(|c| {
        let u = psi[0].curve_parameter(&c);
        ChainPoint { coords: curve.point_at(&u).into_coords(), parameter: u }
    });
    let residuals = (0..3)
        .map(|i| {
            let from = &points[i].coords;
            let to = &points[(i + 1) % 3].coords;
            let difference: Vec<S> = to.iter().zip(from).map(|(a, b)| a.clone() - b.clone()).collect();
            let off_axis = difference
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(S::zero(), |m, (_, d)| S::max_of(m, d.abs()));
            Residual { axis: Axis::new(i), difference, off_axis }
        })
        .collect();
    Ok(FixedPointCertificate { epsilon: Some(epsilon.clone()), chain, points, residuals })
}
