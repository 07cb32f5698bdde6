use crate::curve::{Axis, PlCurve};
use crate::scalar::Scalar;

use super::split::ShadowSplit;
use super::triple::ChainPoint;

/// The steps of the argument that rules out a common endpoint preimage.
#[derive(Clone, Debug, PartialEq)]
pub struct ContradictionTrace<S> {
    /// Axis whose coordinate is cut by the hyperplane.
    pub axis: Axis,
    /// Hyperplane `x_axis = level`.
    pub level: S,
    /// Points where the curve meets the hyperplane (segments lying in it count once).
    pub crossings: usize,
    /// First hit of the hyperplane walking forward from `q0`.
    pub p: ChainPoint<S>,
    /// First hit walking backward.
    pub p_prime: ChainPoint<S>,
    /// `π(p) = π(p')` for the second and third axes.
    pub projections_equal: [bool; 2],
    pub coincide: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport<S> {
    /// Axes of the given splits whose shadow path has `π(q0)` as an endpoint.
    pub endpoint_axes: Vec<Axis>,
    pub triple_endpoint: bool,
    pub trace: Option<ContradictionTrace<S>>,
}

/// First parameter reached from `u0` (forward or backward, within one turn)
/// where coordinate `axis` equals `level`.
fn first_hit<S: Scalar>(curve: &PlCurve<S>, u0: &S, axis: usize, level: &S, forward: bool) -> S {
    let n = curve.len() as i64;
    let value = |u: &S| curve.point_at(u).coord(axis).clone();
    let mut cur = u0.clone();
    let mut knots = Vec::new();
    let j0 = u0.floor().as_i64().unwrap_or(0);
    if forward {
        for j in 1..=n {
            knots.push(S::from_i64(j0 + j));
        }
    } else {
        let start = if u0.is_integer() { j0 - 1 } else { j0 };
        for j in 0..n {
            knots.push(S::from_i64(start - j));
        }
    }
    for next in knots {
        let (a, b) = (value(&cur), value(&next));
        if a == *level && cur != *u0 {
            return cur;
        }
        let (lo, hi) = if a < b { (&a, &b) } else { (&b, &a) };
        if level >= lo && level <= hi && a != b {
            return cur.clone() + (next - cur) * ((level.clone() - a.clone()) / (b - a));
        }
        cur = next;
    }
    u0.clone()
}

fn wrap<S: Scalar>(u: S, n: usize) -> S {
    let n = S::from_i64(n as i64);
    u.clone() - (u / n.clone()).floor() * n
}

/// Checks whether the curve point at parameter `q0` projects to an endpoint
/// of each given shadow path. For a triple endpoint the hyperplane argument
/// is replayed: cut along the first split's axis halfway to the farthest
/// vertex, take the first hits `p`, `p'` of the cut in both directions, and
/// compare their projections along the other two axes.
pub fn endpoint_witness_check<S: Scalar>(curve: &PlCurve<S>, q0: &S, splits: &[ShadowSplit<S>]) -> WitnessReport<S> {
    let x0 = curve.point_at(q0);
    let endpoint_axes: Vec<Axis> = splits
        .iter()
        .filter(|s| {
            let p = x0.without(s.axis.index());
            *s.path.start() == p || *s.path.end() == p
        })
        .map(|s| s.axis)
        .collect();
    let triple_endpoint = endpoint_axes.len() >= 3;
    if !triple_endpoint {
        return WitnessReport { endpoint_axes, triple_endpoint, trace: None };
    }
    let (a1, a2, a3) = (endpoint_axes[0], endpoint_axes[1], endpoint_axes[2]);
    let i = a1.index();
    let v0 = x0.coord(i).clone();
    let far = curve
        .vertices()
        .iter()
        .map(|v| v.coord(i).clone())
        .max_by(|a, b| (a.clone() - v0.clone()).abs().total_cmp(&(b.clone() - v0.clone()).abs()))
        .expect("curve has vertices");
    if far == v0 {
        return WitnessReport { endpoint_axes, triple_endpoint, trace: None };
    }
    let level = (v0 + far) / S::from_i64(2);
    let crossings = curve
        .segments()
        .filter(|s| {
            let (a, b) = (s.start.coord(i), s.end.coord(i));
            (*a == level) || ((a < &level) != (b < &level) && *b != level)
        })
        .count();
    let n = curve.len();
    let u = wrap(first_hit(curve, q0, i, &level, true), n);
    let u_prime = wrap(first_hit(curve, q0, i, &level, false), n);
    let p = curve.point_at(&u);
    let p_prime = curve.point_at(&u_prime);
    let projections_equal =
        [p.without(a2.index()) == p_prime.without(a2.index()), p.without(a3.index()) == p_prime.without(a3.index())];
    let coincide = p == p_prime;
    let trace = ContradictionTrace {
        axis: a1,
        level,
        crossings,
        p: ChainPoint { parameter: u, coords: p.into_coords() },
        p_prime: ChainPoint { parameter: u_prime, coords: p_prime.into_coords() },
        projections_equal,
        coincide,
    };
    WitnessReport { endpoint_axes, triple_endpoint, trace: Some(trace) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_planar_circle;
    use crate::relations::split_top_bottom;
    use crate::Rational;

    #[test]
    fn two_path_shadows_cannot_make_a_triple_witness() {
        let c = gen_planar_circle::<Rational>(3, 6).unwrap();
        let splits: Vec<_> = (0..2).map(|i| split_top_bottom(&c, Axis::new(i)).unwrap()).collect();
        let report = endpoint_witness_check(&c, &splits[0].a, &splits);
        assert!(!report.triple_endpoint);
        assert!(report.trace.is_none());
        assert!(report.endpoint_axes.contains(&Axis::new(0)));
    }

    #[test]
    fn degenerate_triangle_forces_p_equal_p_prime() {
        let c = PlCurve::<Rational>::from_i64s(&[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]]).unwrap();
        let splits: Vec<_> = (0..3).map(|i| split_top_bottom(&c, Axis::new(i)).unwrap()).collect();
        let report = endpoint_witness_check(&c, &Rational::from_i64(0), &splits);
        assert!(report.triple_endpoint);
        let trace = report.trace.unwrap();
        assert_eq!(trace.level, Rational::from_i64(1));
        assert_eq!(trace.projections_equal, [true, true]);
        assert!(trace.coincide);
        assert_eq!(trace.p.parameter, Rational::from_i64(1));
        assert_eq!(trace.p_prime.parameter, Rational::ratio(5, 2));
    }
}
