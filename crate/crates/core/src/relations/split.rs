use std::collections::BTreeSet;

use crate::complex::{classify, shadow_complex, PathParameterization};
use crate::curve::{project, Axis, PlCurve};
use crate::geometry::{Point, ScalarKey};
use crate::scalar::Scalar;

use super::RelationError;

/// The curve cut at the preimages of the two ends of a path-shaped shadow.
///
/// Curve parameters run over `[0, n)` for an `n`-vertex curve: `u = j + t`
/// is the point at fraction `t` along segment `j`. The top arc runs forward
/// from `a` to `a_tilde`, the bottom arc forward from `a_tilde` back to `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadowSplit<S> {
    pub axis: Axis,
    /// Preimage of the start of the path.
    pub a: S,
    /// Preimage of the end of the path.
    pub a_tilde: S,
    pub path: PathParameterization<S>,
    pub curve_len: usize,
}

impl<S: Scalar> ShadowSplit<S> {
    fn n(&self) -> S {
        S::from_i64(self.curve_len as i64)
    }

    /// `a_tilde`, shifted by `n` if needed so it lies in `(a, a + n)`.
    pub fn a_tilde_unwrapped(&self) -> S {
        if self.a_tilde > self.a {
            self.a_tilde.clone()
        } else {
            self.a_tilde.clone() + self.n()
        }
    }

    pub fn top(&self) -> (S, S) {
        (self.a.clone(), self.a_tilde_unwrapped())
    }

    pub fn bottom(&self) -> (S, S) {
        (self.a_tilde_unwrapped(), self.a.clone() + self.n())
    }

    /// Position of `π(γ(u))` along the shadow path, in `[0, 1]`.
    pub fn shadow_parameter(&self, curve: &PlCurve<S>, u: &S) -> S {
        let p = curve.point_at(u).without(self.axis.index());
        self.path.inverse(&p).expect("projected curve point lies on its shadow")
    }
}

/// Curve parameters whose image projects onto `target`; a segment parallel
/// to the axis contributes both of its ends.
fn preimages<S: Scalar>(projected: &[crate::geometry::Segment<S>], target: &Point<S>) -> Vec<S> {
    let n = projected.len();
    let mut out = Vec::new();
    for (j, seg) in projected.iter().enumerate() {
        if seg.is_degenerate() {
            if seg.start.approx_eq(target) {
                out.push(S::from_i64(j as i64));
                out.push(S::from_i64(((j + 1) % n) as i64));
            }
        } else if let Some(t) = seg.locate(target) {
            let u = S::from_i64(j as i64) + t;
            out.push(if u == S::from_i64(n as i64) { S::zero() } else { u });
        }
    }
    out
}

/// Splits the curve at the preimages of the two endpoints of its shadow
/// along `axis`. Among several preimages of an endpoint the one with the
/// least coordinate along `axis` wins, then the smallest parameter.
pub fn split_top_bottom<S: Scalar>(curve: &PlCurve<S>, axis: Axis) -> Result<ShadowSplit<S>, RelationError> {
    let complex = shadow_complex(curve, axis)?;
    let path = PathParameterization::new(&complex)
        .map_err(|_| RelationError::NotAPath { axis, found: classify(&complex).tag() })?;
    let projected = project(curve, axis)?;
    let pick = |end: &Point<S>| -> Result<S, RelationError> {
        preimages(&projected, end)
            .into_iter()
            .min_by(|u, v| {
                let xu = curve.point_at(u).coord(axis.index()).clone();
                let xv = curve.point_at(v).coord(axis.index()).clone();
                xu.total_cmp(&xv).then(u.total_cmp(v))
            })
            .ok_or_else(|| RelationError::Internal("shadow endpoint has no preimage".into()))
    };
    let a = pick(path.start())?;
    let a_tilde = pick(path.end())?;
    Ok(ShadowSplit { axis, a, a_tilde, path, curve_len: curve.len() })
}

/// The curve mapped into the plane by `x -> (position of π(x) along the
/// shadow path, x_axis)`, starting at `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Unraveled<S> {
    pub curve: PlCurve<S>,
    /// Unwrapped curve parameter of each vertex, increasing from `a`.
    pub params: Vec<S>,
    /// Index of the vertex at `a_tilde`; vertices `0..=a_tilde_index` form the top arc.
    pub a_tilde_index: usize,
}

impl<S: Scalar> Unraveled<S> {
    /// First coordinate of vertex `j` (indices wrap).
    pub fn level(&self, j: usize) -> &S {
        self.curve.vertices()[j % self.curve.len()].coord(0)
    }

    /// Curve parameter of vertex `j`, where `j == len` means `a + n`.
    pub fn param(&self, j: usize, curve_len: usize) -> S {
        if j == self.params.len() {
            self.params[0].clone() + S::from_i64(curve_len as i64)
        } else {
            self.params[j].clone()
        }
    }
}

/// Unravels the curve along the split's axis.
///
/// Segments are refined at every point projecting onto a vertex of the
/// shadow complex, so the result is linear on each of its segments. Two
/// curve points have the same projection exactly when their images share the
/// first coordinate.
pub fn unravel<S: Scalar>(curve: &PlCurve<S>, split: &ShadowSplit<S>) -> Result<Unraveled<S>, RelationError> {
    let n = curve.len();
    let n_s = S::from_i64(n as i64);
    let projected = project(curve, split.axis)?;
    let mut cuts: BTreeSet<ScalarKey<S>> = BTreeSet::new();
    let unwrap = |u: S| if u < split.a { u + n_s.clone() } else { u };
    for (j, seg) in projected.iter().enumerate() {
        cuts.insert(ScalarKey(unwrap(S::from_i64(j as i64))));
        if seg.is_degenerate() {
            continue;
        }
        for v in split.path.complex.vertices() {
            if let Some(t) = seg.locate(v) {
                if t > S::zero() && t < S::one() {
                    cuts.insert(ScalarKey(unwrap(S::from_i64(j as i64) + t)));
                }
            }
        }
    }
    cuts.insert(ScalarKey(split.a.clone()));
    cuts.insert(ScalarKey(split.a_tilde_unwrapped()));
    let params: Vec<S> = cuts.into_iter().map(|k| k.0).collect();
    let a_tilde = split.a_tilde_unwrapped();
    let a_tilde_index = params.iter().position(|u| *u == a_tilde).expect("a_tilde is a cut");
    let vertices = params
        .iter()
        .map(|u| {
            let x = curve.point_at(u);
            Point::new(vec![split.shadow_parameter(curve, u), x.coord(split.axis.index()).clone()])
        })
        .collect();
    let curve = PlCurve::new(vertices)?;
    Ok(Unraveled { curve, params, a_tilde_index })
}
