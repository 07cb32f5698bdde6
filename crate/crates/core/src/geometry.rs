//! Points, segments and the d-dimensional segment intersection predicate.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Scalar;

/// A point of R^m.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    coords: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Point { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    /// The dual coordinate function: reads coordinate `index` (0-based).
    pub fn coord(&self, index: usize) -> &S {
        &self.coords[index]
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn sub(&self, other: &Point<S>) -> Vec<S> {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() - b.clone()).collect()
    }

    /// `self + t * dir`.
    pub fn offset(&self, dir: &[S], t: &S) -> Point<S> {
        Point::new(self.coords.iter().zip(dir).map(|(a, d)| a.clone() + t.clone() * d.clone()).collect())
    }

    /// Point at parameter `t` on the segment from `self` to `other`.
    pub fn lerp(&self, other: &Point<S>, t: &S) -> Point<S> {
        self.offset(&other.sub(self), t)
    }

    /// Drops coordinate `index`.
    pub fn without(&self, index: usize) -> Point<S> {
        Point::new(self.coords.iter().enumerate().filter(|(i, _)| *i != index).map(|(_, c)| c.clone()).collect())
    }

    pub fn approx_eq(&self, other: &Point<S>) -> bool {
        self.dim() == other.dim() && self.coords.iter().zip(&other.coords).all(|(a, b)| a.approx_eq(b))
    }

    pub fn squared_distance(&self, other: &Point<S>) -> S {
        dot(&self.sub(other), &self.sub(other))
    }

    /// Lexicographic total order on coordinates.
    pub fn total_cmp(&self, other: &Point<S>) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Wrapper giving points a total order so they can key ordered maps.
#[derive(Clone, Debug)]
pub(crate) struct PointKey<S>(pub Point<S>);

impl<S: Scalar> PartialEq for PointKey<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for PointKey<S> {}

impl<S: Scalar> PartialOrd for PointKey<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for PointKey<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Total-order wrapper for a single scalar.
#[derive(Clone, Debug)]
pub(crate) struct ScalarKey<S>(pub S);

impl<S: Scalar> PartialEq for ScalarKey<S> {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for ScalarKey<S> {}

impl<S: Scalar> PartialOrd for ScalarKey<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for ScalarKey<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn is_zero_vec<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(|c| c.is_negligible())
}

/// True when `a` and `b` are linearly dependent.
pub fn parallel<S: Scalar>(a: &[S], b: &[S]) -> bool {
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let minor = a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
            if !minor.is_negligible() {
                return false;
            }
        }
    }
    true
}

/// A straight closed segment; `start == end` is allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment<S> {
    pub start: Point<S>,
    pub end: Point<S>,
}

/// How two segments meet. Parameters run from 0 at `start` to 1 at `end`.
#[derive(Clone, Debug, PartialEq)]
pub enum Intersection<S> {
    Disjoint,
    /// A single common point at parameter `s` on the first and `t` on the second segment.
    Point {
        s: S,
        t: S,
    },
    /// A common sub-segment, given by its parameter range on each segment.
    /// `s.0 < s.1`; `t.0` and `t.1` are the matching parameters on the second segment.
    Overlap {
        s: (S, S),
        t: (S, S),
    },
}

impl<S: Scalar> Segment<S> {
    pub fn new(start: Point<S>, end: Point<S>) -> Self {
        Segment { start, end }
    }

    pub fn direction(&self) -> Vec<S> {
        self.end.sub(&self.start)
    }

    pub fn is_degenerate(&self) -> bool {
        self.start.approx_eq(&self.end)
    }

    pub fn at(&self, t: &S) -> Point<S> {
        self.start.lerp(&self.end, t)
    }

    fn bbox_disjoint(&self, other: &Segment<S>) -> bool {
        (0..self.start.dim()).any(|i| {
            let (a0, a1) = minmax(self.start.coord(i), self.end.coord(i));
            let (b0, b1) = minmax(other.start.coord(i), other.end.coord(i));
            a1 < b0 || b1 < a0
        })
    }

    /// Parameter of `p` on this segment if `p` lies on it.
    pub fn locate(&self, p: &Point<S>) -> Option<S> {
        let u = self.direction();
        let w = p.sub(&self.start);
        if is_zero_vec(&u) {
            return is_zero_vec(&w).then(S::zero);
        }
        let t = dot(&w, &u) / dot(&u, &u);
        if t < S::zero() || t > S::one() {
            return None;
        }
        self.at(&t).approx_eq(p).then_some(t)
    }

    pub fn intersect(&self, other: &Segment<S>) -> Intersection<S> {
        if self.bbox_disjoint(other) {
            return Intersection::Disjoint;
        }
        let u = self.direction();
        let v = other.direction();
        match (is_zero_vec(&u), is_zero_vec(&v)) {
            (true, _) => {
                return match other.locate(&self.start) {
                    Some(t) => Intersection::Point { s: S::zero(), t },
                    None => Intersection::Disjoint,
                }
            }
            (_, true) => {
                return match self.locate(&other.start) {
                    Some(s) => Intersection::Point { s, t: S::zero() },
                    None => Intersection::Disjoint,
                }
            }
            _ => {}
        }
        let w = other.start.sub(&self.start);
        if parallel(&u, &v) {
            if !parallel(&u, &w) {
                return Intersection::Disjoint;
            }
            let uu = dot(&u, &u);
            let vv = dot(&v, &v);
            let s_of_q0 = dot(&w, &u) / uu.clone();
            let s_of_q1 = s_of_q0.clone() + dot(&v, &u) / uu;
            let (lo, hi) = minmax(&s_of_q0, &s_of_q1);
            let lo = S::max_of(lo.clone(), S::zero());
            let hi = S::min_of(hi.clone(), S::one());
            if lo > hi {
                return Intersection::Disjoint;
            }
            // t(s) = (p0 + s u - q0) . v / |v|^2
            let t_of = |s: &S| (dot(&u, &v) * s.clone() - dot(&w, &v)) / vv.clone();
            if lo.approx_eq(&hi) {
                let t = t_of(&lo);
                return Intersection::Point { s: lo, t };
            }
            let t = (t_of(&lo), t_of(&hi));
            return Intersection::Overlap { s: (lo, hi), t };
        }
        // Normal equations of s u - t v = w.
        let a = dot(&u, &u);
        let b = dot(&u, &v);
        let c = dot(&v, &v);
        let d = dot(&u, &w);
        let e = dot(&v, &w);
        let det = b.clone() * b.clone() - a.clone() * c.clone();
        let s = (b.clone() * e.clone() - d.clone() * c) / det.clone();
        let t = (a * e - b * d) / det;
        if s < S::zero() || s > S::one() || t < S::zero() || t > S::one() {
            return Intersection::Disjoint;
        }
        if self.at(&s).approx_eq(&other.at(&t)) {
            Intersection::Point { s, t }
        } else {
            Intersection::Disjoint
        }
    }
}

fn minmax<'a, S: Scalar>(a: &'a S, b: &'a S) -> (&'a S, &'a S) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn seg(a: &[i64], b: &[i64]) -> Segment<Rational> {
        Segment::new(Point::from_i64s(a), Point::from_i64s(b))
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn proper_crossing_in_the_plane() {
        let r = seg(&[0, 0], &[2, 2]).intersect(&seg(&[0, 2], &[2, 0]));
        assert_eq!(r, Intersection::Point { s: q(1, 2), t: q(1, 2) });
    }

    #[test]
    fn skew_segments_in_space_do_not_meet() {
        let r = seg(&[0, 0, 0], &[2, 2, 0]).intersect(&seg(&[0, 2, 1], &[2, 0, 1]));
        assert_eq!(r, Intersection::Disjoint);
    }

    #[test]
    fn crossing_in_four_dimensions() {
        let r = seg(&[0, 0, 0, 0], &[2, 2, 2, 2]).intersect(&seg(&[2, 0, 2, 0], &[0, 2, 0, 2]));
        assert_eq!(r, Intersection::Point { s: q(1, 2), t: q(1, 2) });
    }

    #[test]
    fn collinear_overlap_reports_both_ranges() {
        let r = seg(&[0, 0], &[2, 0]).intersect(&seg(&[3, 0], &[1, 0]));
        assert_eq!(r, Intersection::Overlap { s: (q(1, 2), q(1, 1)), t: (q(1, 1), q(1, 2)) });
    }

    #[test]
    fn collinear_touching_at_endpoint() {
        let r = seg(&[0, 0], &[1, 0]).intersect(&seg(&[1, 0], &[3, 0]));
        assert_eq!(r, Intersection::Point { s: q(1, 1), t: q(0, 1) });
    }

    #[test]
    fn parallel_but_offset() {
        assert_eq!(seg(&[0, 0], &[2, 0]).intersect(&seg(&[0, 1], &[2, 1])), Intersection::Disjoint);
    }

    #[test]
    fn degenerate_segment_on_segment() {
        let r = seg(&[1, 1], &[1, 1]).intersect(&seg(&[0, 0], &[4, 4]));
        assert_eq!(r, Intersection::Point { s: q(0, 1), t: q(1, 4) });
        assert_eq!(seg(&[1, 2], &[1, 2]).intersect(&seg(&[0, 0], &[4, 4])), Intersection::Disjoint);
    }

    #[test]
    fn locate_rejects_off_segment_points() {
        let s = seg(&[0, 0, 0], &[2, 4, 6]);
        assert_eq!(s.locate(&Point::from_i64s(&[1, 2, 3])), Some(q(1, 2)));
        assert_eq!(s.locate(&Point::from_i64s(&[1, 2, 4])), None);
        assert_eq!(s.locate(&Point::from_i64s(&[3, 6, 9])), None);
    }
}
