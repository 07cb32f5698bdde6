//! Embedded 1-complexes built from projected segments, and their
//! homeomorphism type.
//!
//! [`build_image_complex`] refines a bag of segments into a graph whose edge
//! interiors are pairwise disjoint: segments are split at every pairwise
//! intersection, collinear overlaps collapse onto shared edges and vertices
//! are identified by exact coordinate equality. Vertices are numbered in
//! lexicographic order of their coordinates, so the result is canonical.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{project, validate_simple, Axis, CurveError, PlCurve};
use crate::geometry::{Intersection, Point, PointKey, ScalarKey, Segment};
use crate::scalar::Scalar;
use crate::union_find::UnionFind;

#[derive(Debug, Error, PartialEq)]
pub enum ShadowError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("curve is not simple")]
    NotSimple,
    #[error("shadow is not a simple path (classified as {0})")]
    NotASimplePath(TopologyTag),
    #[error(
        "{count} shadows classified as simple paths; at most two are possible, so an arithmetic invariant is broken"
    )]
    PathBoundViolation { count: usize, axes: Vec<Axis> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageComplex<S> {
    vertices: Vec<Point<S>>,
    edges: Vec<(usize, usize)>,
    incidence: Vec<Vec<usize>>,
}

impl<S: Scalar> ImageComplex<S> {
    /// Builds a complex from explicit data, sorting edges canonically. The
    /// caller is responsible for the disjoint-interiors invariant; see
    /// [`ImageComplex::check_invariants`].
    pub fn from_parts(vertices: Vec<Point<S>>, edges: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (k, &(a, b)) in edges.iter().enumerate() {
            incidence[a].push(k);
            incidence[b].push(k);
        }
        ImageComplex { vertices, edges, incidence }
    }

    pub fn vertices(&self) -> &[Point<S>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn incidence(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// Graphical degree: number of edge-ends at `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn edge_segment(&self, e: usize) -> Segment<S> {
        let (a, b) = self.edges[e];
        Segment::new(self.vertices[a].clone(), self.vertices[b].clone())
    }

    pub fn edge_segments(&self) -> Vec<Segment<S>> {
        (0..self.edges.len()).map(|e| self.edge_segment(e)).collect()
    }

    /// The endpoint of edge `e` that is not `v`.
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// True when `p` lies on some vertex or edge.
    pub fn contains(&self, p: &Point<S>) -> bool {
        self.vertices.iter().any(|v| v.approx_eq(p))
            || (0..self.edges.len()).any(|e| self.edge_segment(e).locate(p).is_some())
    }

    /// Checks that edges have positive length, and that edge interiors are
    /// pairwise disjoint and contain no vertex.
    pub fn check_invariants(&self) -> bool {
        let segs = self.edge_segments();
        for (i, s) in segs.iter().enumerate() {
            if s.is_degenerate() {
                return false;
            }
            for (vi, v) in self.vertices.iter().enumerate() {
                let (a, b) = self.edges[i];
                if vi != a && vi != b && s.locate(v).is_some() {
                    return false;
                }
            }
            for t in &segs[i + 1..] {
                match s.intersect(t) {
                    Intersection::Disjoint => {}
                    Intersection::Point { s: a, t: b } => {
                        let at_end = |x: &S| x.is_negligible() || (x.clone() - S::one()).is_negligible();
                        if !(at_end(&a) && at_end(&b)) {
                            return false;
                        }
                    }
                    Intersection::Overlap { .. } => return false,
                }
            }
        }
        true
    }

    fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        uf.count_sets()
    }

    /// Some cycle as a closed vertex sequence (first vertex not repeated).
    fn find_cycle(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent_edge = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &e in &self.incidence[v] {
                    if e == parent_edge[v] {
                        continue;
                    }
                    let w = self.other_end(e, v);
                    if depth[w] == usize::MAX {
                        depth[w] = depth[v] + 1;
                        parent_edge[w] = e;
                        stack.push(w);
                    } else {
                        return Some(self.tree_path_cycle(v, w, &parent_edge, &depth));
                    }
                }
            }
        }
        None
    }

    fn tree_path_cycle(&self, mut v: usize, mut w: usize, parent_edge: &[usize], depth: &[usize]) -> Vec<usize> {
        let mut left = vec![v];
        let mut right = vec![w];
        while depth[v] > depth[w] {
            v = self.other_end(parent_edge[v], v);
            left.push(v);
        }
        while depth[w] > depth[v] {
            w = self.other_end(parent_edge[w], w);
            right.push(w);
        }
        while v != w {
            v = self.other_end(parent_edge[v], v);
            w = self.other_end(parent_edge[w], w);
            left.push(v);
            right.push(w);
        }
        right.pop();
        right.reverse();
        left.extend(right);
        left
    }

    /// The walk around a connected complex whose vertices all have degree 2.
    fn walk_cycle(&self) -> Vec<usize> {
        let mut cycle = vec![0];
        let mut prev_edge = self.incidence[0][0];
        let mut v = self.other_end(prev_edge, 0);
        while v != 0 {
            cycle.push(v);
            let e = *self.incidence[v].iter().find(|&&e| e != prev_edge).expect("degree 2");
            prev_edge = e;
            v = self.other_end(e, v);
        }
        cycle
    }
}

/// Segments are split at every pairwise intersection point, collinear
/// overlaps are merged and equal points are identified exactly.
/// Zero-length segments contribute a vertex only.
pub fn build_image_complex<S: Scalar>(segments: &[Segment<S>]) -> ImageComplex<S> {
    let (proper, points): (Vec<&Segment<S>>, Vec<&Segment<S>>) = segments.iter().partition(|s| !s.is_degenerate());
    let mut cuts: Vec<BTreeSet<ScalarKey<S>>> =
        proper.iter().map(|_| [ScalarKey(S::zero()), ScalarKey(S::one())].into_iter().collect()).collect();
    for i in 0..proper.len() {
        for j in (i + 1)..proper.len() {
            match proper[i].intersect(proper[j]) {
                Intersection::Disjoint => {}
                Intersection::Point { s, t } => {
                    cuts[i].insert(ScalarKey(s));
                    cuts[j].insert(ScalarKey(t));
                }
                Intersection::Overlap { s, t } => {
                    cuts[i].insert(ScalarKey(s.0));
                    cuts[i].insert(ScalarKey(s.1));
                    cuts[j].insert(ScalarKey(t.0));
                    cuts[j].insert(ScalarKey(t.1));
                }
            }
        }
        for p in &points {
            if let Some(s) = proper[i].locate(&p.start) {
                cuts[i].insert(ScalarKey(s));
            }
        }
    }

    let mut pieces: Vec<(Point<S>, Point<S>)> = Vec::new();
    let mut vertex_set: BTreeSet<PointKey<S>> = BTreeSet::new();
    for (seg, params) in proper.iter().zip(&cuts) {
        let pts: Vec<Point<S>> = params.iter().map(|k| seg.at(&k.0)).collect();
        for p in &pts {
            vertex_set.insert(PointKey(p.clone()));
        }
        for w in pts.windows(2) {
            pieces.push((w[0].clone(), w[1].clone()));
        }
    }
    for p in &points {
        vertex_set.insert(PointKey(p.start.clone()));
    }
    let index: BTreeMap<PointKey<S>, usize> = vertex_set.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let vertices: Vec<Point<S>> = vertex_set.into_iter().map(|k| k.0).collect();
    let edges =
        pieces.into_iter().map(|(a, b)| (index[&PointKey(a)], index[&PointKey(b)])).filter(|(a, b)| a != b).collect();
    ImageComplex::from_parts(vertices, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TopologyTag {
    SimplePath,
    SimpleClosedCurve,
    Tree,
    Disconnected,
    Other,
}

impl TopologyTag {
    pub const ALL: [TopologyTag; 5] = [
        TopologyTag::SimplePath,
        TopologyTag::SimpleClosedCurve,
        TopologyTag::Tree,
        TopologyTag::Disconnected,
        TopologyTag::Other,
    ];
}

impl fmt::Display for TopologyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Homeomorphism type of a complex together with checkable evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum TopologyClass {
    /// The two degree-1 vertices, smaller index first.
    SimplePath {
        endpoints: [usize; 2],
    },
    /// Every vertex, in cyclic order.
    SimpleClosedCurve {
        cycle: Vec<usize>,
    },
    /// Vertices of degree at least 3 (empty only for the one-point tree).
    Tree {
        branch_vertices: Vec<usize>,
    },
    Disconnected {
        components: usize,
    },
    /// Some cycle of a connected complex that is not a simple closed curve.
    Other {
        cycle: Vec<usize>,
    },
}

impl TopologyClass {
    pub fn tag(&self) -> TopologyTag {
        match self {
            TopologyClass::SimplePath { .. } => TopologyTag::SimplePath,
            TopologyClass::SimpleClosedCurve { .. } => TopologyTag::SimpleClosedCurve,
            TopologyClass::Tree { .. } => TopologyTag::Tree,
            TopologyClass::Disconnected { .. } => TopologyTag::Disconnected,
            TopologyClass::Other { .. } => TopologyTag::Other,
        }
    }

    /// Re-derives the evidence against the complex.
    pub fn check_witness<S: Scalar>(&self, complex: &ImageComplex<S>) -> bool {
        let is_cycle = |cycle: &[usize]| {
            !cycle.is_empty()
                && (0..cycle.len()).all(|i| {
                    let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                    complex.incidence(a).iter().any(|&e| complex.other_end(e, a) == b)
                })
                && cycle.iter().collect::<BTreeSet<_>>().len() == cycle.len()
        };
        match self {
            TopologyClass::SimplePath { endpoints } => {
                endpoints[0] != endpoints[1]
                    && endpoints.iter().all(|&v| v < complex.vertices.len() && complex.degree(v) == 1)
            }
            TopologyClass::SimpleClosedCurve { cycle } => cycle.len() == complex.vertices.len() && is_cycle(cycle),
            TopologyClass::Other { cycle } => is_cycle(cycle),
            TopologyClass::Tree { branch_vertices } => branch_vertices.iter().all(|&v| complex.degree(v) >= 3),
            TopologyClass::Disconnected { components } => *components == complex.components(),
        }
    }
}

/// Homeomorphism type of the complex.
///
/// Disconnected beats everything; a connected acyclic complex is a simple
/// path when it has exactly two leaves and every other vertex has degree 2,
/// otherwise a tree; a connected complex with all degrees 2 is a simple
/// closed curve; anything else is `Other`.
pub fn classify<S: Scalar>(complex: &ImageComplex<S>) -> TopologyClass {
    let v = complex.vertices.len();
    if v == 0 {
        return TopologyClass::Disconnected { components: 0 };
    }
    let components = complex.components();
    if components > 1 {
        return TopologyClass::Disconnected { components };
    }
    let acyclic = complex.edges.len() + 1 == v;
    let degrees: Vec<usize> = (0..v).map(|i| complex.degree(i)).collect();
    if acyclic {
        let leaves: Vec<usize> = (0..v).filter(|&i| degrees[i] == 1).collect();
        if leaves.len() == 2 && degrees.iter().all(|&d| d <= 2) {
            return TopologyClass::SimplePath { endpoints: [leaves[0], leaves[1]] };
        }
        return TopologyClass::Tree { branch_vertices: (0..v).filter(|&i| degrees[i] >= 3).collect() };
    }
    if degrees.iter().all(|&d| d == 2) {
        return TopologyClass::SimpleClosedCurve { cycle: complex.walk_cycle() };
    }
    TopologyClass::Other { cycle: complex.find_cycle().expect("connected complex with a cycle") }
}

/// The image complex of the shadow along `axis`. Simplicity is not required.
pub fn shadow_complex<S: Scalar>(curve: &PlCurve<S>, axis: Axis) -> Result<ImageComplex<S>, ShadowError> {
    Ok(build_image_complex(&project(curve, axis)?))
}

/// Classifies every coordinate shadow of a simple curve.
///
/// At most two shadows of a simple closed curve can be simple paths; a third
/// one is reported as [`ShadowError::PathBoundViolation`], which can only mean
/// an arithmetic defect.
pub fn shadow_classes<S: Scalar>(curve: &PlCurve<S>) -> Result<Vec<TopologyClass>, ShadowError> {
    if !validate_simple(curve) {
        return Err(ShadowError::NotSimple);
    }
    let classes = Axis::all(curve.dimension())
        .map(|axis| shadow_complex(curve, axis).map(|c| classify(&c)))
        .collect::<Result<Vec<_>, _>>()?;
    let axes: Vec<Axis> = classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.tag() == TopologyTag::SimplePath)
        .map(|(i, _)| Axis::new(i))
        .collect();
    if axes.len() > 2 {
        return Err(ShadowError::PathBoundViolation { count: axes.len(), axes });
    }
    Ok(classes)
}

/// Combinatorial parameterization of a simple-path complex: the walk between
/// its endpoints, with each edge spanning an equal share of `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathParameterization<S> {
    /// Vertex walk from the start endpoint to the other.
    pub walk: Vec<usize>,
    /// `edges[k]` joins `walk[k]` and `walk[k + 1]`.
    pub edges: Vec<usize>,
    pub complex: ImageComplex<S>,
}

impl<S: Scalar> PathParameterization<S> {
    /// Starts at the endpoint with the lexicographically smaller coordinates.
    pub fn new(complex: &ImageComplex<S>) -> Result<Self, ShadowError> {
        let endpoints = match classify(complex) {
            TopologyClass::SimplePath { endpoints } => endpoints,
            other => return Err(ShadowError::NotASimplePath(other.tag())),
        };
        let mut walk = vec![endpoints[0]];
        let mut edges = Vec::new();
        let mut prev = usize::MAX;
        let mut v = endpoints[0];
        while v != endpoints[1] {
            let e = *complex.incidence(v).iter().find(|&&e| e != prev).expect("path continues");
            v = complex.other_end(e, v);
            prev = e;
            walk.push(v);
            edges.push(e);
        }
        Ok(PathParameterization { walk, edges, complex: complex.clone() })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn start(&self) -> &Point<S> {
        &self.complex.vertices[self.walk[0]]
    }

    pub fn end(&self) -> &Point<S> {
        &self.complex.vertices[*self.walk.last().unwrap()]
    }

    /// Parameter of the `k`-th walk vertex: `k / edge_count`.
    pub fn vertex_parameter(&self, k: usize) -> S {
        S::ratio(k as i64, self.edge_count() as i64)
    }

    /// The walk position of complex vertex `v`.
    pub fn walk_position(&self, v: usize) -> Option<usize> {
        self.walk.iter().position(|&w| w == v)
    }

    /// Inverse of the parameterization: the parameter of a point of the path.
    pub fn inverse(&self, p: &Point<S>) -> Option<S> {
        let m = S::from_i64(self.edge_count() as i64);
        for k in 0..self.edge_count() {
            let seg = Segment::new(
                self.complex.vertices[self.walk[k]].clone(),
                self.complex.vertices[self.walk[k + 1]].clone(),
            );
            if let Some(t) = seg.locate(p) {
                return Some((S::from_i64(k as i64) + t) / m);
            }
        }
        None
    }

    /// The point at parameter `t` in `[0, 1]`.
    pub fn eval(&self, t: &S) -> Point<S> {
        let scaled = t.clone() * S::from_i64(self.edge_count() as i64);
        let k = scaled.floor().as_i64().unwrap_or(0).clamp(0, self.edge_count() as i64 - 1) as usize;
        let frac = scaled - S::from_i64(k as i64);
        self.complex.vertices[self.walk[k]].lerp(&self.complex.vertices[self.walk[k + 1]], &frac)
    }
}

/// Convenience for [`PathParameterization::new`].
pub fn path_parameterization<S: Scalar>(complex: &ImageComplex<S>) -> Result<PathParameterization<S>, ShadowError> {
    PathParameterization::new(complex)
}
