use std::collections::BTreeSet;

use crate::circle::{PlCircleMap, TorusCurve};
use crate::curve::distinct_offsets;
use crate::fiber::{cycle_decomposition, fiber_product, Component, GraphPoint, MappedGraph};
use crate::geometry::ScalarKey;
use crate::scalar::Scalar;

use super::RelationError;

#[derive(Clone, Debug, PartialEq)]
pub struct ComposeOptions<S> {
    /// Largest shift applied to a shared-coordinate vertex value to make all
    /// of them distinct. Must lie in `(0, 1/4)`.
    pub budget: S,
}

impl<S: Scalar> Default for ComposeOptions<S> {
    fn default() -> Self {
        ComposeOptions { budget: S::ratio(1, 1_000_000) }
    }
}

/// A curve in the composite relation together with how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct Composition<S> {
    /// `(x ∘ σ1, z ∘ σ2)`.
    pub curve: TorusCurve<S>,
    /// Degree of the shared coordinate along the chosen cycle; odd and positive.
    pub k: i64,
    /// Parameters on the two (prepared) inputs, on the breakpoints of `curve`.
    pub sigma: (PlCircleMap<S>, PlCircleMap<S>),
    /// The inputs after refinement and perturbation of the shared coordinate.
    pub inputs: (TorusCurve<S>, TorusCurve<S>),
    pub regular_value: S,
    /// Preimage counts of the regular value under the two shared-coordinate maps.
    pub fiber_counts: (usize, usize),
    /// Preimage count of the regular value on the chosen cycle.
    pub cycle_fiber_count: usize,
}

/// Refines `(y, other)` onto a common grid with at least two pieces where
/// each piece of `y` moves by at most `1/2`.
fn refine_shared<S: Scalar>(y: &PlCircleMap<S>, other: &PlCircleMap<S>) -> (PlCircleMap<S>, PlCircleMap<S>) {
    let both = TorusCurve::new(y.clone(), other.clone());
    let mut extra = Vec::new();
    for p in both.first().pieces() {
        let span = (p.v1.clone() - p.v0.clone()).abs() * S::from_i64(2);
        let pieces = span.ceil().as_i64().unwrap_or(1).max(1);
        for j in 1..pieces {
            extra.push(p.t0.clone() + (p.t1.clone() - p.t0.clone()) * S::ratio(j, pieces));
        }
    }
    let mut refined = both.refine(&extra);
    if refined.breakpoints().len() < 2 {
        let p = &refined.first().pieces()[0];
        let mid = (p.t0.clone() + p.t1.clone()) / S::from_i64(2);
        refined = refined.refine(&[mid]);
    }
    (refined.first().clone(), refined.second().clone())
}

fn circle_distance<S: Scalar>(a: &S, b: &S) -> S {
    let d = (a.clone() - b.clone()).fract_part();
    S::min_of(d.clone(), S::one() - d)
}

/// Least `m / 2^j` in `[0, 1)` (smallest `j` first) avoiding `taken`.
fn regular_value<S: Scalar>(taken: &BTreeSet<ScalarKey<S>>) -> S {
    let mut den: i64 = 1;
    loop {
        let start = if den == 1 { 0 } else { 1 };
        for m in (start..den).step_by(if den == 1 { 1 } else { 2 }) {
            let y = S::ratio(m, den);
            if !taken.contains(&ScalarKey(y.clone())) {
                return y;
            }
        }
        den *= 2;
    }
}

/// Number of points of `g` mapped to `y0`, which must not be a vertex value.
fn fiber_count<S: Scalar>(g: &MappedGraph<S>, edges: impl Iterator<Item = usize>, y0: &S) -> usize {
    edges
        .map(|e| {
            let base = g.values()[g.edges()[e].0].clone();
            let inc = g.increments()[e].clone();
            let (lo, hi) = if inc.is_negative() { (base.clone() + inc, base) } else { (base.clone(), base + inc) };
            let mut n = (lo.clone() - y0.clone()).floor() + S::one();
            let mut count = 0;
            while y0.clone() + n.clone() < hi {
                count += 1;
                n = n + S::one();
            }
            count
        })
        .sum()
}

/// Circle parameter of a point of a cycle graph built on `breakpoints`.
fn cycle_parameter<S: Scalar>(p: &GraphPoint<S>, breakpoints: &[S]) -> S {
    let m = breakpoints.len();
    match p {
        GraphPoint::Vertex(j) => breakpoints[*j].clone(),
        GraphPoint::Edge { edge, t } => {
            let t0 = breakpoints[*edge].clone();
            let t1 = if edge + 1 < m { breakpoints[edge + 1].clone() } else { breakpoints[0].clone() + S::one() };
            t0.clone() + (t1 - t0) * t.clone()
        }
    }
}

fn piece_length<S: Scalar>(breakpoints: &[S], e: usize) -> S {
    let m = breakpoints.len();
    if e + 1 < m {
        breakpoints[e + 1].clone() - breakpoints[e].clone()
    } else {
        breakpoints[0].clone() + S::one() - breakpoints[e].clone()
    }
}

/// [`compose_relation_curves_with`] using the default options.
pub fn compose_relation_curves<S: Scalar>(
    psi1: &TorusCurve<S>,
    psi2: &TorusCurve<S>,
) -> Result<Composition<S>, RelationError> {
    compose_relation_curves_with(psi1, psi2, &ComposeOptions::default())
}

/// Composes the relations traced by `psi1 = (x, y)` and `psi2 = (y, z)`.
///
/// With degrees `(a, b1)` and `(b2, c)`, both `b1` and `b2` odd, the result
/// is a curve `(x ∘ σ1, z ∘ σ2)` in the composite relation of degree
/// `(a k / b1, c k / b2)`, where `k` is an odd common multiple of `b1` and
/// `b2`. The shared coordinate of both inputs is refined and its vertex
/// values are shifted (within `options.budget`) until they are pairwise
/// distinct; the fiber product over it is then a disjoint union of cycles,
/// and a cycle meeting the fiber of a regular value an odd number of times is
/// selected and oriented so that `k > 0`.
pub fn compose_relation_curves_with<S: Scalar>(
    psi1: &TorusCurve<S>,
    psi2: &TorusCurve<S>,
    options: &ComposeOptions<S>,
) -> Result<Composition<S>, RelationError> {
    let (a, b1) = (psi1.first().degree(), psi1.second().degree());
    let (b2, c) = (psi2.first().degree(), psi2.second().degree());
    if b1 % 2 == 0 || b2 % 2 == 0 {
        return Err(RelationError::EvenMiddleDegree { b1, b2 });
    }
    if !options.budget.is_positive() || options.budget >= S::ratio(1, 4) {
        return Err(RelationError::BadBudget);
    }
    let (y1, x) = refine_shared(psi1.second(), psi1.first());
    let (y2, z) = refine_shared(psi2.first(), psi2.second());

    // Shift the shared-coordinate vertex values apart.
    let values: Vec<S> = y1.lift_values().iter().chain(y2.lift_values()).map(|v| v.fract_part()).collect();
    let pinned = vec![false; values.len()];
    let offsets = distinct_offsets(&values, &pinned, &options.budget, |v| *v >= S::zero() && *v < S::one())
        .map_err(|_| RelationError::Internal("shared values could not be separated".into()))?;
    let m1 = y1.breakpoints().len();
    let shift = |f: &PlCircleMap<S>, offs: &[S]| {
        let lift = f.lift_values().iter().zip(offs).map(|(v, o)| v.clone() + o.clone()).collect();
        PlCircleMap::new(f.breakpoints().to_vec(), lift, f.degree())
    };
    let y1 = shift(&y1, &offsets[..m1])?;
    let y2 = shift(&y2, &offsets[m1..])?;
    let in1 = TorusCurve::new(x.clone(), y1.clone());
    let in2 = TorusCurve::new(y2.clone(), z.clone());

    let g1 = MappedGraph::circle_cycle(y1.lift_values(), b1)?;
    let g2 = MappedGraph::circle_cycle(y2.lift_values(), b2)?;
    let product = fiber_product(&g1, &g2)?;
    let parts = cycle_decomposition(&product.graph)?;
    if parts.iter().any(|p| matches!(p, Component::Path { .. })) {
        return Err(RelationError::Internal("fiber product over distinct values has an open path".into()));
    }

    let taken: BTreeSet<ScalarKey<S>> = g1.values().iter().chain(g2.values()).cloned().map(ScalarKey).collect();
    let y0 = regular_value(&taken);
    let c1 = fiber_count(&g1, 0..g1.edges().len(), &y0);
    let c2 = fiber_count(&g2, 0..g2.edges().len(), &y0);
    let counts: Vec<usize> =
        parts.iter().map(|p| fiber_count(&product.graph, p.edges().iter().copied(), &y0)).collect();
    if counts.iter().sum::<usize>() != c1 * c2 {
        return Err(RelationError::Internal("fiber of the product is not the product of fibers".into()));
    }
    let chosen = counts.iter().position(|n| n % 2 == 1).ok_or_else(|| {
        RelationError::Internal(format!(
            "no cycle meets the fiber over {y0} an odd number of times ({c1} x {c2} points)"
        ))
    })?;
    let (mut vertices, mut edges) = match &parts[chosen] {
        Component::Cycle { vertices, edges } => (vertices.clone(), edges.clone()),
        Component::Path { .. } => unreachable!(),
    };

    let signed = |vs: &[usize], es: &[usize]| -> S {
        es.iter()
            .enumerate()
            .map(|(i, &e)| {
                let inc = product.graph.increments()[e].clone();
                if product.graph.edges()[e].0 == vs[i] {
                    inc
                } else {
                    -inc
                }
            })
            .fold(S::zero(), |acc, d| acc + d)
    };
    let mut total = signed(&vertices, &edges);
    if total.is_negative() {
        vertices[1..].reverse();
        edges.reverse();
        total = -total;
    }
    let k = total.as_i64().ok_or_else(|| RelationError::Internal("cycle degree is not an integer".into()))?;
    if k % 2 == 0 {
        return Err(RelationError::Internal(format!("cycle degree {k} is even")));
    }

    // Unwrapped parameters on both inputs along the cycle.
    let len = vertices.len();
    let mut s1 = vec![cycle_parameter(&product.points[vertices[0]].0, y1.breakpoints())];
    let mut s2 = vec![cycle_parameter(&product.points[vertices[0]].1, y2.breakpoints())];
    for i in 0..len {
        let (v, w) = (vertices[i], vertices[(i + 1) % len]);
        let (e1, e2) = product.edge_sources[edges[i]];
        let step = |from: &GraphPoint<S>, to: &GraphPoint<S>, g: &MappedGraph<S>, e: usize, bps: &[S]| -> S {
            let l0 = from.local_parameter(g, e).expect("cycle vertex on its source edge");
            let l1 = to.local_parameter(g, e).expect("cycle vertex on its source edge");
            (l1 - l0) * piece_length(bps, e)
        };
        let d1 = step(&product.points[v].0, &product.points[w].0, &g1, e1, y1.breakpoints());
        let d2 = step(&product.points[v].1, &product.points[w].1, &g2, e2, y2.breakpoints());
        s1.push(s1[i].clone() + d1);
        s2.push(s2[i].clone() + d2);
    }
    let wind = |s: &[S]| (s[len].clone() - s[0].clone()).as_i64();
    let (d1, d2) = match (wind(&s1), wind(&s2)) {
        (Some(d1), Some(d2)) => (d1, d2),
        _ => return Err(RelationError::Internal("parameter walk does not close up".into())),
    };
    if d1 * b1 != k || d2 * b2 != k {
        return Err(RelationError::Internal(format!("degree bookkeeping failed: {d1}·{b1}, {d2}·{b2} vs {k}")));
    }
    s1.pop();
    s2.pop();
    let breakpoints: Vec<S> = (0..len).map(|j| S::ratio(j as i64, len as i64)).collect();
    let fx: Vec<S> = s1.iter().map(|s| x.lift_at(s)).collect();
    let fz: Vec<S> = s2.iter().map(|s| z.lift_at(s)).collect();
    let curve = TorusCurve::new(
        PlCircleMap::new(breakpoints.clone(), fx, a * d1)?,
        PlCircleMap::new(breakpoints.clone(), fz, c * d2)?,
    );
    let sigma = (PlCircleMap::new(breakpoints.clone(), s1, d1)?, PlCircleMap::new(breakpoints, s2, d2)?);
    Ok(Composition {
        curve,
        k,
        sigma,
        inputs: (in1, in2),
        regular_value: y0,
        fiber_counts: (c1, c2),
        cycle_fiber_count: counts[chosen],
    })
}

impl<S: Scalar> Composition<S> {
    /// Largest circle distance between the shared coordinates of the two
    /// inputs at the breakpoints of `curve`; zero up to rounding.
    pub fn shared_mismatch(&self) -> S {
        self.sigma
            .0
            .breakpoints()
            .iter()
            .map(|t| {
                let y1 = self.inputs.0.second().eval(&self.sigma.0.lift_at(t));
                let y2 = self.inputs.1.first().eval(&self.sigma.1.lift_at(t));
                circle_distance(&y1, &y2)
            })
            .fold(S::zero(), S::max_of)
    }
}

pub(crate) fn distance_on_circle<S: Scalar>(a: &S, b: &S) -> S {
    circle_distance(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::torus_degree;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn linear(a: i64, b: i64, res: usize) -> TorusCurve<Rational> {
        TorusCurve::new(PlCircleMap::linear(a, q(0, 1), res), PlCircleMap::linear(b, q(0, 1), res))
    }

    #[test]
    fn worked_example_gives_five_six() {
        let out = compose_relation_curves(&linear(1, 3, 4), &linear(5, 2, 5)).unwrap();
        assert_eq!(out.k, 15);
        assert_eq!(torus_degree(&out.curve), (5, 6));
        for t in out.curve.breakpoints() {
            let (x, z) = out.curve.eval(t);
            assert_eq!(x, out.inputs.0.first().eval(&out.sigma.0.lift_at(t)));
            assert_eq!(z, out.inputs.1.second().eval(&out.sigma.1.lift_at(t)));
        }
        assert_eq!(out.shared_mismatch(), q(0, 1));
    }

    #[test]
    fn even_middle_degree_is_rejected() {
        let err = compose_relation_curves(&linear(1, 2, 3), &linear(5, 3, 3)).unwrap_err();
        assert_eq!(err, RelationError::EvenMiddleDegree { b1: 2, b2: 5 });
    }

    #[test]
    fn composing_reversals_gives_minus_k_minus_k() {
        let psi = TorusCurve::new(PlCircleMap::<Rational>::linear(1, q(0, 1), 3), PlCircleMap::linear(-1, q(1, 7), 3));
        let out = compose_relation_curves(&psi, &psi).unwrap();
        assert_eq!(out.k % 2, 1);
        assert_eq!(torus_degree(&out.curve), (-out.k, -out.k));
        assert_eq!(out.cycle_fiber_count % 2, 1);
        assert_eq!(out.fiber_counts.0 % 2, 1);
    }

    #[test]
    fn swapped_inputs_exchange_roles() {
        let p1 = linear(1, 3, 4);
        let p2 = linear(5, 2, 5);
        let out = compose_relation_curves(&p2.swap(), &p1.swap()).unwrap();
        assert_eq!(torus_degree(&out.curve), (2 * out.k / 5, out.k / 3));
    }

    #[test]
    fn regular_value_prefers_coarse_dyadics() {
        let taken: BTreeSet<ScalarKey<Rational>> = [q(0, 1), q(1, 2), q(1, 4)].into_iter().map(ScalarKey).collect();
        assert_eq!(regular_value(&taken), q(3, 4));
    }
}
