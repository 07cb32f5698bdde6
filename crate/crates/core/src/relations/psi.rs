use crate::circle::{torus_degree, PlCircleMap, TorusCurve};
use crate::curve::{distinct_offsets, Axis, PlCurve};
use crate::fiber::{cycle_decomposition, fiber_product, Component, GraphPoint, MappedGraph};
use crate::scalar::Scalar;

use super::split::{unravel, ShadowSplit, Unraveled};
use super::RelationError;

/// A loop in `γ × γ` of degree `(1, -1)` through pairs of curve points whose
/// shadow positions differ by at most `epsilon`.
///
/// Circle coordinate `c` stands for the curve point at parameter `n·c`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationCurve<S> {
    pub curve: TorusCurve<S>,
    pub epsilon: S,
    pub axis: Axis,
    pub curve_len: usize,
    /// Largest shadow-position gap over all vertices of `curve`.
    pub max_gap: S,
}

impl<S: Scalar> RelationCurve<S> {
    /// Curve parameter in `[0, n)` of a circle coordinate.
    pub fn curve_parameter(&self, c: &S) -> S {
        c.fract_part() * S::from_i64(self.curve_len as i64)
    }
}

/// Curve parameter of a point on one of the two arcs, given as a path-graph
/// point; `offset` is the unraveled index of the arc's first vertex.
fn arc_parameter<S: Scalar>(p: &GraphPoint<S>, un: &Unraveled<S>, offset: usize, curve_len: usize) -> S {
    let (j, t) = match p {
        GraphPoint::Vertex(v) => (*v, S::zero()),
        GraphPoint::Edge { edge, t } => (*edge, t.clone()),
    };
    let u0 = un.param(offset + j, curve_len);
    if t.is_zero() {
        return u0;
    }
    let u1 = un.param(offset + j + 1, curve_len);
    u0.clone() + (u1 - u0) * t
}

/// Builds the degree-`(1, -1)` relation curve of a path-shaped shadow.
///
/// The unraveled top and bottom arcs are turned into path graphs over the
/// shadow position. Their interior levels are moved by at most `epsilon / 2`
/// so they become pairwise distinct and stay inside `(0, 1)`; the fiber
/// product then contains a unique path from `(a, a)` to `(ã, ã)`. That path,
/// followed by its mirror image with the factors exchanged, is the result.
pub fn build_relation_curve<S: Scalar>(
    curve: &PlCurve<S>,
    split: &ShadowSplit<S>,
    epsilon: &S,
) -> Result<RelationCurve<S>, RelationError> {
    if !epsilon.is_positive() {
        return Err(RelationError::NonPositiveEpsilon);
    }
    let n = curve.len();
    let un = unravel(curve, split)?;
    let m = un.curve.len();
    let k = un.a_tilde_index;

    // Interior levels of the top arc (1..k) then of the bottom arc (k+1..m).
    let interior: Vec<usize> = (1..k).chain(k + 1..m).collect();
    let mut values: Vec<S> = interior.iter().map(|&j| un.level(j).clone()).collect();
    let mut pinned = vec![false; values.len()];
    values.extend([S::zero(), S::one()]);
    pinned.extend([true, true]);
    let budget = epsilon.clone() / S::from_i64(2);
    let offsets = distinct_offsets(&values, &pinned, &budget, |c| *c > S::zero() && *c < S::one())
        .map_err(|i| RelationError::EpsilonTooSmall { vertex: interior.get(i).copied().unwrap_or(0) })?;
    let mut level = |j: usize| -> S {
        match interior.iter().position(|&i| i == j % m) {
            Some(pos) => un.level(j).clone() + offsets[pos].clone(),
            None => un.level(j).clone(),
        }
    };
    let top: Vec<S> = (0..=k).map(&mut level).collect();
    let bottom: Vec<S> = (k..=m).map(&mut level).collect();
    let g_top = MappedGraph::line_path(top)?;
    let g_bottom = MappedGraph::line_path(bottom)?;
    let product = fiber_product(&g_top, &g_bottom)?;

    let find = |p: GraphPoint<S>, q: GraphPoint<S>| product.points.iter().position(|x| *x == (p.clone(), q.clone()));
    let start = find(GraphPoint::Vertex(0), GraphPoint::Vertex(m - k));
    let end = find(GraphPoint::Vertex(k), GraphPoint::Vertex(0));
    let (start, end) = match (start, end) {
        (Some(s), Some(e)) => (s, e),
        _ => return Err(RelationError::Internal("split points missing from the fiber product".into())),
    };
    let walk = cycle_decomposition(&product.graph)?
        .into_iter()
        .find_map(|c| match c {
            Component::Path { vertices, .. } if vertices[0] == start && *vertices.last().unwrap() == end => {
                Some(vertices)
            }
            Component::Path { mut vertices, .. } if vertices[0] == end && *vertices.last().unwrap() == start => {
                vertices.reverse();
                Some(vertices)
            }
            _ => None,
        })
        .ok_or_else(|| RelationError::Internal("no path joins the split points in the fiber product".into()))?;

    let sigma: Vec<(S, S)> = walk
        .iter()
        .map(|&v| {
            let (p, q) = &product.points[v];
            (arc_parameter(p, &un, 0, n), arc_parameter(q, &un, k, n))
        })
        .collect();
    let len = sigma.len() - 1;
    let mut first = Vec::with_capacity(2 * len);
    let mut second = Vec::with_capacity(2 * len);
    for (x, y) in &sigma {
        first.push(x.clone());
        second.push(y.clone());
    }
    for (x, y) in sigma[1..len].iter().rev() {
        first.push(y.clone());
        second.push(x.clone());
    }
    let n_s = S::from_i64(n as i64);
    let params: Vec<S> = (0..2 * len).map(|j| S::ratio(j as i64, 2 * len as i64)).collect();
    let scale = |v: Vec<S>| v.into_iter().map(|u| u / n_s.clone()).collect::<Vec<S>>();
    let f1 = PlCircleMap::from_period(&params, &scale(first), 1)?;
    let f2 = PlCircleMap::from_period(&params, &scale(second), -1)?;
    let torus = TorusCurve::new(f1, f2);
    if torus_degree(&torus) != (1, -1) {
        return Err(RelationError::Internal("relation curve has the wrong degree".into()));
    }

    let mut max_gap = S::zero();
    for (x, y) in &sigma {
        let gap = (split.shadow_parameter(curve, x) - split.shadow_parameter(curve, y)).abs();
        if gap > *epsilon {
            return Err(RelationError::Internal(format!("relation curve leaves the {epsilon}-band")));
        }
        max_gap = S::max_of(max_gap, gap);
    }
    Ok(RelationCurve { curve: torus, epsilon: epsilon.clone(), axis: split.axis, curve_len: n, max_gap })
}
