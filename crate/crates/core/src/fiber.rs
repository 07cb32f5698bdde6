//! Fiber products of finite graphs mapped to the line or the circle.
//!
//! A [`MappedGraph`] assigns a value to every vertex and extends it linearly
//! over edges. For circle targets each edge carries its own signed lift
//! increment, so an edge may run across the point `0 ≡ 1`. The fiber product
//! of two such graphs is the set of pairs with equal image; it is again a
//! mapped graph whose vertices are the pairs in which at least one
//! coordinate is a vertex of its factor.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::ScalarKey;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum FiberError {
    #[error("edge {edge} is not injective: its endpoint values coincide")]
    NotInjective { edge: usize },
    #[error("edge {edge} on a circle target must have a lift increment strictly between -1 and 1 that matches its endpoint values")]
    BadCircleLift { edge: usize },
    #[error("edge {edge} refers to a missing vertex")]
    MissingVertex { edge: usize },
    #[error("edge {edge} is a loop")]
    Loop { edge: usize },
    #[error("the two graphs map to different targets")]
    TargetMismatch,
    #[error("vertex {vertex} has graphical degree {degree}; only 1 and 2 are allowed here")]
    BranchVertex { vertex: usize, degree: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Line,
    Circle,
}

/// A finite graph with a map to the line or circle that is linear and
/// injective on every edge.
#[derive(Clone, Debug, PartialEq)]
pub struct MappedGraph<S> {
    values: Vec<S>,
    edges: Vec<(usize, usize)>,
    /// Lift increment from the first to the second endpoint of each edge.
    increments: Vec<S>,
    target: Target,
    incidence: Vec<Vec<usize>>,
}

impl<S: Scalar> MappedGraph<S> {
    /// A graph over the line; increments are the value differences.
    pub fn line(values: Vec<S>, edges: Vec<(usize, usize)>) -> Result<Self, FiberError> {
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a >= values.len() || b >= values.len() {
                return Err(FiberError::MissingVertex { edge: e });
            }
        }
        let increments = edges.iter().map(|&(a, b)| values[b].clone() - values[a].clone()).collect();
        Self::build(values, edges, increments, Target::Line)
    }

    /// A graph over the circle `R/Z`. Vertex values are reduced mod 1;
    /// `increments[e]` is the signed distance travelled along edge `e`.
    pub fn circle(values: Vec<S>, edges: Vec<(usize, usize)>, increments: Vec<S>) -> Result<Self, FiberError> {
        let values = values.into_iter().map(|v| v.fract_part()).collect();
        Self::build(values, edges, increments, Target::Circle)
    }

    /// The cycle graph `0 - 1 - ... - (m-1) - 0` over the circle, with vertex
    /// values read from a lift `lift[j]` and total increment `degree`.
    pub fn circle_cycle(lift: &[S], degree: i64) -> Result<Self, FiberError> {
        let m = lift.len();
        let edges = (0..m).map(|j| (j, (j + 1) % m)).collect();
        let increments = (0..m)
            .map(|j| {
                if j + 1 < m {
                    lift[j + 1].clone() - lift[j].clone()
                } else {
                    lift[0].clone() + S::from_i64(degree) - lift[j].clone()
                }
            })
            .collect();
        Self::circle(lift.to_vec(), edges, increments)
    }

    /// The path graph `0 - 1 - ... - (m-1)` over the line.
    pub fn line_path(values: Vec<S>) -> Result<Self, FiberError> {
        let edges = (1..values.len()).map(|j| (j - 1, j)).collect();
        Self::line(values, edges)
    }

    fn build(
        values: Vec<S>,
        edges: Vec<(usize, usize)>,
        increments: Vec<S>,
        target: Target,
    ) -> Result<Self, FiberError> {
        let mut incidence = vec![Vec::new(); values.len()];
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a >= values.len() || b >= values.len() {
                return Err(FiberError::MissingVertex { edge: e });
            }
            if a == b {
                return Err(FiberError::Loop { edge: e });
            }
            let inc = &increments[e];
            if inc.is_negligible() {
                return Err(FiberError::NotInjective { edge: e });
            }
            if target == Target::Circle {
                let matches = (values[a].clone() + inc.clone() - values[b].clone()).is_integer();
                if inc.abs() >= S::one() || !matches {
                    return Err(FiberError::BadCircleLift { edge: e });
                }
            }
            incidence[a].push(e);
            incidence[b].push(e);
        }
        Ok(MappedGraph { values, edges, increments, target, incidence })
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn increments(&self) -> &[S] {
        &self.increments
    }

    pub fn incidence(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Lifted value at local parameter `t ∈ [0, 1]` along edge `e`, measured
    /// from the value of its first endpoint.
    pub fn edge_value(&self, e: usize, t: &S) -> S {
        let (a, _) = self.edges[e];
        self.values[a].clone() + self.increments[e].clone() * t.clone()
    }

    /// Value of a point of the graph (mod 1 for circle targets).
    pub fn value_at(&self, p: &GraphPoint<S>) -> S {
        let v = match p {
            GraphPoint::Vertex(v) => self.values[*v].clone(),
            GraphPoint::Edge { edge, t } => self.edge_value(*edge, t),
        };
        match self.target {
            Target::Line => v,
            Target::Circle => v.fract_part(),
        }
    }
}

/// A point of a graph: a vertex, or an interior point of an edge at local
/// parameter `t ∈ (0, 1)` measured from the edge's first endpoint.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphPoint<S> {
    Vertex(usize),
    Edge { edge: usize, t: S },
}

impl<S: Scalar> GraphPoint<S> {
    fn on_edge<T: Scalar>(g: &MappedGraph<T>, edge: usize, t: S) -> Self {
        let (a, b) = g.edges[edge];
        if t.is_zero() {
            GraphPoint::Vertex(a)
        } else if t == S::one() {
            GraphPoint::Vertex(b)
        } else {
            GraphPoint::Edge { edge, t }
        }
    }

    pub fn vertex(&self) -> Option<usize> {
        match self {
            GraphPoint::Vertex(v) => Some(*v),
            GraphPoint::Edge { .. } => None,
        }
    }

    /// Local parameter of this point on the closure of edge `e`.
    pub fn local_parameter<T: Scalar>(&self, g: &MappedGraph<T>, e: usize) -> Option<S> {
        match self {
            GraphPoint::Vertex(v) if g.edges[e].0 == *v => Some(S::zero()),
            GraphPoint::Vertex(v) if g.edges[e].1 == *v => Some(S::one()),
            GraphPoint::Edge { edge, t } if *edge == e => Some(t.clone()),
            _ => None,
        }
    }

    fn key(&self) -> (usize, usize, Option<ScalarKey<S>>) {
        match self {
            GraphPoint::Vertex(v) => (0, *v, None),
            GraphPoint::Edge { edge, t } => (1, *edge, Some(ScalarKey(t.clone()))),
        }
    }
}

/// The fiber product with provenance: each product vertex records the
/// factor points it pairs, and each product edge the factor edges it runs in.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberProduct<S> {
    pub graph: MappedGraph<S>,
    pub points: Vec<(GraphPoint<S>, GraphPoint<S>)>,
    pub edge_sources: Vec<(usize, usize)>,
}

type PairKey<S> = ((usize, usize, Option<ScalarKey<S>>), (usize, usize, Option<ScalarKey<S>>));

struct Builder<S> {
    index: BTreeMap<PairKey<S>, usize>,
    points: Vec<(GraphPoint<S>, GraphPoint<S>)>,
    values: Vec<S>,
}

impl<S: Scalar> Builder<S> {
    fn vertex(&mut self, p: GraphPoint<S>, q: GraphPoint<S>, value: S) -> usize {
        let key = (p.key(), q.key());
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.points.len();
        self.index.insert(key, i);
        self.points.push((p, q));
        self.values.push(value);
        i
    }
}

fn interval<S: Scalar>(lo: S, inc: &S) -> (S, S) {
    let hi = lo.clone() + inc.clone();
    if inc.is_negative() {
        (hi, lo)
    } else {
        (lo, hi)
    }
}

/// Integer shifts `n` with `x + n` strictly inside `(lo, hi)` (Line: only `n = 0`).
fn shifts_inside<S: Scalar>(target: Target, x: &S, lo: &S, hi: &S) -> Vec<S> {
    match target {
        Target::Line => {
            if x > lo && x < hi {
                vec![S::zero()]
            } else {
                vec![]
            }
        }
        Target::Circle => {
            let mut out = Vec::new();
            let mut n = (lo.clone() - x.clone()).floor() + S::one();
            while x.clone() + n.clone() < *hi {
                out.push(n.clone());
                n = n + S::one();
            }
            out
        }
    }
}

/// The fiber product `G1 ×_Y G2` with its cell structure.
///
/// Product vertices are pairs with equal image in which at least one
/// coordinate is a factor vertex; product edges are the pieces of
/// `edge × edge` cells between them. Vertices are numbered canonically
/// (by provenance), so the result does not depend on discovery order.
pub fn fiber_product<S: Scalar>(g1: &MappedGraph<S>, g2: &MappedGraph<S>) -> Result<FiberProduct<S>, FiberError> {
    if g1.target != g2.target {
        return Err(FiberError::TargetMismatch);
    }
    let target = g1.target;
    let mut b = Builder { index: BTreeMap::new(), points: Vec::new(), values: Vec::new() };

    // Vertex × vertex.
    for (u, fu) in g1.values.iter().enumerate() {
        for (v, fv) in g2.values.iter().enumerate() {
            let d = fu.clone() - fv.clone();
            let equal = match target {
                Target::Line => d.is_negligible(),
                Target::Circle => d.is_integer(),
            };
            if equal {
                b.vertex(GraphPoint::Vertex(u), GraphPoint::Vertex(v), fu.clone());
            }
        }
    }
    // Vertex × edge interior, in both orders.
    for (u, fu) in g1.values.iter().enumerate() {
        for e in 0..g2.edges.len() {
            let (lo, hi) = interval(g2.values[g2.edges[e].0].clone(), &g2.increments[e]);
            for n in shifts_inside(target, fu, &lo, &hi) {
                let t = (fu.clone() + n - g2.values[g2.edges[e].0].clone()) / g2.increments[e].clone();
                b.vertex(GraphPoint::Vertex(u), GraphPoint::Edge { edge: e, t }, fu.clone());
            }
        }
    }
    for (v, fv) in g2.values.iter().enumerate() {
        for e in 0..g1.edges.len() {
            let (lo, hi) = interval(g1.values[g1.edges[e].0].clone(), &g1.increments[e]);
            for n in shifts_inside(target, fv, &lo, &hi) {
                let t = (fv.clone() + n - g1.values[g1.edges[e].0].clone()) / g1.increments[e].clone();
                b.vertex(GraphPoint::Edge { edge: e, t }, GraphPoint::Vertex(v), fv.clone());
            }
        }
    }
    // Edge × edge: one product edge per shift with a non-degenerate overlap.
    let mut raw_edges: Vec<(usize, usize, S, (usize, usize))> = Vec::new();
    for e1 in 0..g1.edges.len() {
        let base1 = g1.values[g1.edges[e1].0].clone();
        let (lo1, hi1) = interval(base1.clone(), &g1.increments[e1]);
        for e2 in 0..g2.edges.len() {
            let base2 = g2.values[g2.edges[e2].0].clone();
            let (lo2, hi2) = interval(base2.clone(), &g2.increments[e2]);
            let shifts: Vec<S> = match target {
                Target::Line => vec![S::zero()],
                Target::Circle => {
                    let mut out = Vec::new();
                    let mut n = (lo1.clone() - hi2.clone()).ceil();
                    while n <= hi1.clone() - lo2.clone() {
                        out.push(n.clone());
                        n = n + S::one();
                    }
                    out
                }
            };
            for n in shifts {
                let lo = S::max_of(lo1.clone(), lo2.clone() + n.clone());
                let hi = S::min_of(hi1.clone(), hi2.clone() + n.clone());
                if lo >= hi || (hi.clone() - lo.clone()).is_negligible() {
                    continue;
                }
                let end = |y: &S| {
                    let t1 = (y.clone() - base1.clone()) / g1.increments[e1].clone();
                    let t2 = (y.clone() - n.clone() - base2.clone()) / g2.increments[e2].clone();
                    (GraphPoint::on_edge(g1, e1, t1), GraphPoint::on_edge(g2, e2, t2))
                };
                let (p0, q0) = end(&lo);
                let (p1, q1) = end(&hi);
                let a = b.vertex(p0, q0, lo.clone());
                let c = b.vertex(p1, q1, hi.clone());
                raw_edges.push((a, c, hi - lo, (e1, e2)));
            }
        }
    }

    // Canonical renumbering by provenance key.
    let order: Vec<usize> = b.index.values().copied().collect();
    let mut rank = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let mut points = vec![None; order.len()];
    let mut values = vec![S::zero(); order.len()];
    for (old, (p, v)) in b.points.into_iter().zip(b.values).enumerate() {
        points[rank[old]] = Some(p);
        values[rank[old]] = v;
    }
    let mut edges: Vec<(_, S, (usize, usize))> =
        raw_edges.into_iter().map(|(a, c, inc, src)| ((rank[a], rank[c]), inc, src)).collect();
    edges.sort_by(|x, y| x.2.cmp(&y.2).then(x.0.cmp(&y.0)));
    let edge_sources = edges.iter().map(|e| e.2).collect();
    let increments = edges.iter().map(|e| e.1.clone()).collect();
    let edge_list = edges.into_iter().map(|e| e.0).collect();
    let graph = match target {
        Target::Line => MappedGraph::build(values, edge_list, increments, Target::Line)?,
        Target::Circle => MappedGraph::circle(values, edge_list, increments)?,
    };
    Ok(FiberProduct {
        graph,
        points: points.into_iter().map(|p| p.expect("every rank filled")).collect(),
        edge_sources,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeViolation {
    pub vertex: usize,
    /// Which factor supplied the vertex coordinate (0 or 1).
    pub factor: usize,
    pub expected: usize,
    pub found: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeReport {
    /// Product vertices with exactly one factor-vertex coordinate.
    pub checked: usize,
    pub violations: Vec<DegreeViolation>,
}

impl DegreeReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares the graphical degree of each product vertex that has exactly one
/// factor-vertex coordinate with the degree of that factor vertex.
pub fn vertex_degree_check<S: Scalar>(
    product: &FiberProduct<S>,
    g1: &MappedGraph<S>,
    g2: &MappedGraph<S>,
) -> DegreeReport {
    let mut report = DegreeReport::default();
    for (i, (p, q)) in product.points.iter().enumerate() {
        let (factor, expected) = match (p.vertex(), q.vertex()) {
            (Some(u), None) => (0, g1.degree(u)),
            (None, Some(v)) => (1, g2.degree(v)),
            _ => continue,
        };
        report.checked += 1;
        let found = product.graph.degree(i);
        if found != expected {
            report.violations.push(DegreeViolation { vertex: i, factor, expected, found });
        }
    }
    report
}

/// A connected piece of a graph whose vertices have degree 1 or 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    /// Vertex walk between two degree-1 vertices and the edges joining them.
    Path { vertices: Vec<usize>, edges: Vec<usize> },
    /// Closed vertex walk (first vertex not repeated); `edges[k]` leaves `vertices[k]`.
    Cycle { vertices: Vec<usize>, edges: Vec<usize> },
}

impl Component {
    pub fn vertices(&self) -> &[usize] {
        match self {
            Component::Path { vertices, .. } | Component::Cycle { vertices, .. } => vertices,
        }
    }

    pub fn edges(&self) -> &[usize] {
        match self {
            Component::Path { edges, .. } | Component::Cycle { edges, .. } => edges,
        }
    }
}

/// Splits the edges into maximal paths and cycles.
///
/// Paths come first, each starting at its smaller endpoint, in order of that
/// endpoint; cycles follow in order of their least vertex, starting there and
/// leaving along its lower-numbered edge. Isolated vertices are skipped.
pub fn cycle_decomposition<S: Scalar>(g: &MappedGraph<S>) -> Result<Vec<Component>, FiberError> {
    let n = g.vertex_count();
    if let Some(v) = (0..n).find(|&v| g.degree(v) > 2) {
        return Err(FiberError::BranchVertex { vertex: v, degree: g.degree(v) });
    }
    let mut used = vec![false; g.edges.len()];
    let mut out = Vec::new();
    let walk = |start: usize, used: &mut Vec<bool>| {
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let mut v = start;
        while let Some(&e) = g.incidence[v].iter().filter(|&&e| !used[e]).min() {
            used[e] = true;
            edges.push(e);
            v = g.other_end(e, v);
            if v == start {
                break;
            }
            vertices.push(v);
        }
        (vertices, edges)
    };
    for v in 0..n {
        if g.degree(v) == 1 && !used[g.incidence[v][0]] {
            let (vertices, edges) = walk(v, &mut used);
            out.push(Component::Path { vertices, edges });
        }
    }
    for v in 0..n {
        if g.incidence[v].iter().any(|&e| !used[e]) {
            let (vertices, edges) = walk(v, &mut used);
            out.push(Component::Cycle { vertices, edges });
        }
    }
    Ok(out)
}
