//! Piecewise-linear maps of the circle and curves on the torus.
//!
//! The circle is `R / Z`; points are scalars mod 1 and no angles appear. A map
//! is stored through a continuous lift `F: R -> R` with `F(t + 1) = F(t) + w`,
//! given by its values at finitely many breakpoints in `[0, 1)` and linear in
//! between. The integer `w` is the topological degree.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::geometry::ScalarKey;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum CircleMapError {
    #[error("a circle map needs at least one breakpoint")]
    NoBreakpoints,
    #[error("breakpoints and lift values differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("breakpoints must be strictly increasing inside [0, 1)")]
    BadBreakpoints,
    #[error("lift does not close up: jump {0} is not an integer")]
    NonIntegerJump(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlCircleMap<S> {
    breakpoints: Vec<S>,
    lift: Vec<S>,
    degree: i64,
}

/// One linear piece of a lift: `(t0, v0) -> (t1, v1)`, with `t1` possibly
/// past 1 on the wrap-around piece.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece<S> {
    pub t0: S,
    pub v0: S,
    pub t1: S,
    pub v1: S,
}

impl<S: Scalar> Piece<S> {
    pub fn at(&self, t: &S) -> S {
        let span = self.t1.clone() - self.t0.clone();
        self.v0.clone() + (self.v1.clone() - self.v0.clone()) * (t.clone() - self.t0.clone()) / span
    }

    /// Parameter where the piece takes value `v`, if it is not constant.
    fn solve(&self, v: &S) -> S {
        self.t0.clone()
            + (v.clone() - self.v0.clone()) / (self.v1.clone() - self.v0.clone()) * (self.t1.clone() - self.t0.clone())
    }
}

impl<S: Scalar> PlCircleMap<S> {
    pub fn new(breakpoints: Vec<S>, lift: Vec<S>, degree: i64) -> Result<Self, CircleMapError> {
        if breakpoints.is_empty() {
            return Err(CircleMapError::NoBreakpoints);
        }
        if breakpoints.len() != lift.len() {
            return Err(CircleMapError::LengthMismatch(breakpoints.len(), lift.len()));
        }
        let in_range = breakpoints.iter().all(|t| *t >= S::zero() && *t < S::one());
        let increasing = breakpoints.windows(2).all(|w| w[0] < w[1]);
        if !in_range || !increasing {
            return Err(CircleMapError::BadBreakpoints);
        }
        Ok(PlCircleMap { breakpoints, lift, degree })
    }

    /// Builds a map from samples of a lift over one period.
    ///
    /// `params` must be strictly increasing with `params.last() < params[0] + 1`;
    /// they may lie anywhere on the real line. The lift gains `degree` over
    /// one period.
    pub fn from_period(params: &[S], values: &[S], degree: i64) -> Result<Self, CircleMapError> {
        if params.is_empty() {
            return Err(CircleMapError::NoBreakpoints);
        }
        if params.len() != values.len() {
            return Err(CircleMapError::LengthMismatch(params.len(), values.len()));
        }
        let w = S::from_i64(degree);
        let increasing = params.windows(2).all(|p| p[0] < p[1]);
        if !increasing || params[params.len() - 1] >= params[0].clone() + S::one() {
            return Err(CircleMapError::BadBreakpoints);
        }
        let mut pairs: Vec<(S, S)> = params
            .iter()
            .zip(values)
            .map(|(t, v)| {
                let shift = t.floor();
                (t.clone() - shift.clone(), v.clone() - shift * w.clone())
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (breakpoints, lift) = pairs.into_iter().unzip();
        Self::new(breakpoints, lift, degree)
    }

    pub fn identity() -> Self {
        Self::linear(1, S::zero(), 1)
    }

    pub fn constant(value: S) -> Self {
        PlCircleMap { breakpoints: vec![S::zero()], lift: vec![value], degree: 0 }
    }

    /// `t -> degree * t + offset`, sampled at `resolution` equally spaced breakpoints.
    pub fn linear(degree: i64, offset: S, resolution: usize) -> Self {
        let n = resolution.max(1) as i64;
        let breakpoints: Vec<S> = (0..n).map(|j| S::ratio(j, n)).collect();
        let lift = breakpoints.iter().map(|t| offset.clone() + S::from_i64(degree) * t.clone()).collect();
        PlCircleMap { breakpoints, lift, degree }
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn lift_values(&self) -> &[S] {
        &self.lift
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    fn w(&self) -> S {
        S::from_i64(self.degree)
    }

    /// Linear pieces over one period, starting at the first breakpoint.
    pub fn pieces(&self) -> Vec<Piece<S>> {
        let m = self.breakpoints.len();
        (0..m)
            .map(|k| {
                if k + 1 < m {
                    Piece {
                        t0: self.breakpoints[k].clone(),
                        v0: self.lift[k].clone(),
                        t1: self.breakpoints[k + 1].clone(),
                        v1: self.lift[k + 1].clone(),
                    }
                } else {
                    Piece {
                        t0: self.breakpoints[k].clone(),
                        v0: self.lift[k].clone(),
                        t1: self.breakpoints[0].clone() + S::one(),
                        v1: self.lift[0].clone() + self.w(),
                    }
                }
            })
            .collect()
    }

    /// The lift at any real parameter.
    pub fn lift_at(&self, t: &S) -> S {
        let shift = t.floor();
        let mut r = t.clone() - shift.clone();
        let mut base = shift * self.w();
        if r < self.breakpoints[0] {
            r = r + S::one();
            base = base - self.w();
        }
        let k = match self.breakpoints.binary_search_by(|b| b.total_cmp(&r)) {
            Ok(k) => return base + self.lift[k].clone(),
            Err(k) => k - 1,
        };
        let pieces = self.pieces();
        base + pieces[k].at(&r)
    }

    /// The map itself, as a point of `[0, 1)`.
    pub fn eval(&self, t: &S) -> S {
        self.lift_at(t).fract_part()
    }

    /// Same map with additional breakpoints (taken mod 1).
    pub fn refine(&self, extra: &[S]) -> Self {
        let mut grid: BTreeSet<ScalarKey<S>> = self.breakpoints.iter().cloned().map(ScalarKey).collect();
        grid.extend(extra.iter().map(|t| ScalarKey(t.fract_part())));
        let breakpoints: Vec<S> = grid.into_iter().map(|k| k.0).collect();
        let lift = breakpoints.iter().map(|t| self.lift_at(t)).collect();
        PlCircleMap { breakpoints, lift, degree: self.degree }
    }

    /// Parameters `t` in `[0, 1)` with `f(t) = t`.
    pub fn fixed_points(&self) -> Vec<S> {
        diagonal_intersections(&TorusCurve::new(self.clone(), Self::identity()))
    }

    /// Shifts the lift by an integer; the map on the circle is unchanged.
    pub fn shift_lift(&self, n: i64) -> Self {
        PlCircleMap {
            breakpoints: self.breakpoints.clone(),
            lift: self.lift.iter().map(|v| v.clone() + S::from_i64(n)).collect(),
            degree: self.degree,
        }
    }
}

pub fn degree<S: Scalar>(f: &PlCircleMap<S>) -> i64 {
    f.degree()
}

/// `f ∘ g`, refined so every piece of `g` lands in a single piece of `f`.
pub fn compose<S: Scalar>(f: &PlCircleMap<S>, g: &PlCircleMap<S>) -> PlCircleMap<S> {
    let mut grid: BTreeSet<ScalarKey<S>> = g.breakpoints.iter().cloned().map(ScalarKey).collect();
    for piece in g.pieces() {
        if piece.v0 == piece.v1 {
            continue;
        }
        let (lo, hi) = if piece.v0 < piece.v1 { (&piece.v0, &piece.v1) } else { (&piece.v1, &piece.v0) };
        for c in &f.breakpoints {
            let mut n = (lo.clone() - c.clone()).ceil();
            while c.clone() + n.clone() <= *hi {
                let level = c.clone() + n.clone();
                if level > *lo && level < *hi {
                    grid.insert(ScalarKey(piece.solve(&level).fract_part()));
                }
                n = n + S::one();
            }
        }
    }
    let breakpoints: Vec<S> = grid.into_iter().map(|k| k.0).collect();
    let lift = breakpoints.iter().map(|t| f.lift_at(&g.lift_at(t))).collect();
    PlCircleMap { breakpoints, lift, degree: f.degree * g.degree }
}

/// A curve `S^1 -> T^2` given by two circle maps on a shared breakpoint grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusCurve<S> {
    first: PlCircleMap<S>,
    second: PlCircleMap<S>,
}

impl<S: Scalar> TorusCurve<S> {
    /// Refines both factors onto the union of their breakpoints.
    pub fn new(first: PlCircleMap<S>, second: PlCircleMap<S>) -> Self {
        if first.breakpoints == second.breakpoints {
            return TorusCurve { first, second };
        }
        let a = first.refine(&second.breakpoints);
        let b = second.refine(&first.breakpoints);
        TorusCurve { first: a, second: b }
    }

    pub fn first(&self) -> &PlCircleMap<S> {
        &self.first
    }

    pub fn second(&self) -> &PlCircleMap<S> {
        &self.second
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.first.breakpoints
    }

    pub fn refine(&self, extra: &[S]) -> Self {
        TorusCurve { first: self.first.refine(extra), second: self.second.refine(extra) }
    }

    /// Exchanges the factors: the curve of the inverse relation.
    pub fn swap(&self) -> Self {
        TorusCurve { first: self.second.clone(), second: self.first.clone() }
    }

    pub fn eval(&self, t: &S) -> (S, S) {
        (self.first.eval(t), self.second.eval(t))
    }

    pub fn lift_at(&self, t: &S) -> (S, S) {
        (self.first.lift_at(t), self.second.lift_at(t))
    }
}

pub fn torus_degree<S: Scalar>(c: &TorusCurve<S>) -> (i64, i64) {
    (c.first.degree, c.second.degree)
}

/// Parameters where the curve meets the diagonal `{(u, u)}`.
///
/// These are the solutions of `F1(t) - F2(t) ∈ Z`, found exactly on each
/// linear piece. When the difference is an integer along a whole interval,
/// the left end of that interval represents it. The result is sorted and
/// non-empty whenever the two degrees differ.
pub fn diagonal_intersections<S: Scalar>(c: &TorusCurve<S>) -> Vec<S> {
    let diff: Vec<Piece<S>> = c
        .first
        .pieces()
        .into_iter()
        .zip(c.second.pieces())
        .map(|(a, b)| Piece { t0: a.t0, v0: a.v0 - b.v0, t1: a.t1, v1: a.v1 - b.v1 })
        .collect();
    let mut contacts: Vec<(S, S)> = Vec::new();
    let mut crossings: Vec<S> = Vec::new();
    for p in &diff {
        if p.v0 == p.v1 {
            if p.v0.is_integer() {
                match contacts.last_mut() {
                    Some(last) if last.1 == p.t0 => last.1 = p.t1.clone(),
                    _ => contacts.push((p.t0.clone(), p.t1.clone())),
                }
            }
            continue;
        }
        let (lo, hi) = if p.v0 < p.v1 { (&p.v0, &p.v1) } else { (&p.v1, &p.v0) };
        let mut n = lo.ceil();
        while n <= *hi {
            let t = p.solve(&n);
            if t < p.t1 {
                crossings.push(t);
            }
            n = n + S::one();
        }
    }
    let inside_contact = |t: &S| contacts.iter().any(|(a, b)| *t >= *a && *t <= *b);
    let mut out: Vec<S> = contacts.iter().map(|(a, _)| a.fract_part()).collect();
    out.extend(crossings.into_iter().filter(|t| !inside_contact(t)).map(|t| t.fract_part()));
    out.sort_by(|a, b| a.total_cmp(b));
    out.dedup_by(|a, b| a.total_cmp(b) == Ordering::Equal);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn standard_degrees() {
        assert_eq!(degree(&PlCircleMap::<Rational>::identity()), 1);
        let antipodal = PlCircleMap::linear(1, q(1, 2), 4);
        assert_eq!(degree(&antipodal), 1);
        assert_eq!(antipodal.eval(&q(3, 4)), q(1, 4));
        assert_eq!(degree(&PlCircleMap::<Rational>::linear(3, q(0, 1), 5)), 3);
    }

    #[test]
    fn lift_is_continuous_and_quasi_periodic() {
        let f = PlCircleMap::new(vec![q(1, 4), q(1, 2)], vec![q(0, 1), q(3, 1)], 2).unwrap();
        // Wrap piece runs from (1/2, 3) to (5/4, 2).
        assert_eq!(f.lift_at(&q(0, 1)), f.lift_at(&q(1, 1)) - q(2, 1));
        assert_eq!(f.lift_at(&q(1, 8)), q(1, 6));
        assert_eq!(f.lift_at(&q(3, 8)), q(3, 2));
        assert_eq!(f.lift_at(&q(-3, 4)), q(-2, 1));
    }

    #[test]
    fn from_period_wraps_parameters() {
        let f = PlCircleMap::from_period(&[q(1, 2), q(1, 1), q(5, 4)], &[q(0, 1), q(1, 2), q(3, 4)], 1).unwrap();
        assert_eq!(f.breakpoints(), &[q(0, 1), q(1, 4), q(1, 2)]);
        assert_eq!(f.lift_values(), &[q(-1, 2), q(-1, 4), q(0, 1)]);
        assert_eq!(f.lift_at(&q(3, 2)), q(1, 1));
    }

    #[test]
    fn rejects_malformed_maps() {
        assert_eq!(PlCircleMap::<Rational>::new(vec![], vec![], 0), Err(CircleMapError::NoBreakpoints));
        assert_eq!(
            PlCircleMap::new(vec![q(1, 2), q(1, 4)], vec![q(0, 1), q(0, 1)], 0),
            Err(CircleMapError::BadBreakpoints)
        );
        assert_eq!(PlCircleMap::new(vec![q(1, 1)], vec![q(0, 1)], 0), Err(CircleMapError::BadBreakpoints));
    }

    #[test]
    fn composition_multiplies_degrees() {
        let f = PlCircleMap::<Rational>::linear(2, q(0, 1), 3);
        let g = PlCircleMap::<Rational>::linear(3, q(1, 7), 2);
        assert_eq!(degree(&compose(&f, &g)), 6);
        let r = PlCircleMap::<Rational>::linear(-1, q(0, 1), 3);
        assert_eq!(degree(&compose(&r, &r)), 1);
    }

    #[test]
    fn composing_with_identity_keeps_values() {
        let f = PlCircleMap::new(vec![q(0, 1), q(1, 3), q(1, 2)], vec![q(0, 1), q(2, 1), q(1, 1)], -1).unwrap();
        let h = compose(&f, &PlCircleMap::identity());
        assert_eq!(degree(&h), -1);
        for t in h.breakpoints() {
            assert_eq!(h.lift_at(t), f.lift_at(t));
        }
    }

    #[test]
    fn torus_degrees() {
        let c = TorusCurve::new(PlCircleMap::<Rational>::identity(), PlCircleMap::linear(-1, q(0, 1), 1));
        assert_eq!(torus_degree(&c), (1, -1));
        let c = TorusCurve::new(PlCircleMap::linear(5, q(0, 1), 7), PlCircleMap::linear(6, q(0, 1), 3));
        assert_eq!(torus_degree(&c), (5, 6));
        assert_eq!(c.first().breakpoints(), c.second().breakpoints());
        let c = TorusCurve::new(PlCircleMap::constant(q(1, 3)), PlCircleMap::constant(q(2, 3)));
        assert_eq!(torus_degree(&c), (0, 0));
    }

    #[test]
    fn diagonal_examples() {
        let off = TorusCurve::new(PlCircleMap::<Rational>::identity(), PlCircleMap::linear(1, q(1, 2), 1));
        assert!(diagonal_intersections(&off).is_empty());
        let flip = TorusCurve::new(PlCircleMap::<Rational>::identity(), PlCircleMap::linear(-1, q(0, 1), 1));
        assert_eq!(diagonal_intersections(&flip), vec![q(0, 1), q(1, 2)]);
        let c = TorusCurve::new(PlCircleMap::linear(5, q(0, 1), 10), PlCircleMap::linear(6, q(0, 1), 10));
        assert_eq!(diagonal_intersections(&c), vec![q(0, 1)]);
    }

    #[test]
    fn segment_long_contact_reports_left_endpoint() {
        // Both factors constant 0 on [1/4, 1/2].
        let a = PlCircleMap::new(vec![q(0, 1), q(1, 4), q(1, 2)], vec![q(0, 1), q(1, 1), q(1, 1)], 1).unwrap();
        let b = PlCircleMap::new(vec![q(0, 1), q(1, 4), q(1, 2)], vec![q(1, 2), q(0, 1), q(0, 1)], 0).unwrap();
        let hits = diagonal_intersections(&TorusCurve::new(a, b));
        assert!(hits.contains(&q(1, 4)));
        assert!(!hits.contains(&q(1, 2)));
    }

    #[test]
    fn reflection_has_two_fixed_points() {
        let r = PlCircleMap::<Rational>::linear(-1, q(0, 1), 4);
        assert_eq!(r.fixed_points(), vec![q(0, 1), q(1, 2)]);
        assert!(PlCircleMap::<Rational>::linear(1, q(1, 2), 4).fixed_points().is_empty());
    }

    #[test]
    fn float_maps_compose() {
        let f = PlCircleMap::<f64>::linear(2, 0.0, 4);
        let g = PlCircleMap::<f64>::linear(-3, 0.25, 4);
        assert_eq!(degree(&compose(&f, &g)), -6);
    }
}
