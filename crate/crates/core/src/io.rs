//! JSON interchange. Every number is written as a decimal integer or `p/q`
//! string so rationals round-trip exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circle::{CircleMapError, PlCircleMap, TorusCurve};
use crate::complex::ImageComplex;
use crate::curve::{CurveError, PlCurve};
use crate::geometry::Point;
use crate::relations::{ChainPoint, FixedPointCertificate, Residual, TripleChain};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{context}: `{token}` is not an integer or p/q rational")]
    BadNumber { context: String, token: String },
    #[error("declared dimension {declared} but vertex {index} has {found} coordinates")]
    DimensionMismatch { declared: usize, index: usize, found: usize },
    #[error("edge {edge} refers to vertex {vertex}, but there are only {count}")]
    BadEdge { edge: usize, vertex: usize, count: usize },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    CircleMap(#[from] CircleMapError),
}

fn parse_number<S: Scalar>(token: &str, context: impl FnOnce() -> String) -> Result<S, IoError> {
    S::parse_literal(token).ok_or_else(|| IoError::BadNumber { context: context(), token: token.to_string() })
}

fn literals<S: Scalar>(values: &[S]) -> Vec<String> {
    values.iter().map(Scalar::to_literal).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveJson {
    pub dimension: usize,
    pub vertices: Vec<Vec<String>>,
}

impl CurveJson {
    pub fn from_curve<S: Scalar>(curve: &PlCurve<S>) -> Self {
        CurveJson {
            dimension: curve.dimension(),
            vertices: curve.vertices().iter().map(|v| literals(v.coords())).collect(),
        }
    }

    pub fn to_curve<S: Scalar>(&self) -> Result<PlCurve<S>, IoError> {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != self.dimension {
                    return Err(IoError::DimensionMismatch { declared: self.dimension, index: i, found: row.len() });
                }
                let coords = row
                    .iter()
                    .enumerate()
                    .map(|(j, t)| parse_number(t, || format!("vertex {i}, coordinate {j}")))
                    .collect::<Result<Vec<S>, _>>()?;
                Ok(Point::new(coords))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PlCurve::new(vertices)?)
    }
}

pub fn parse_curve<S: Scalar>(text: &str) -> Result<PlCurve<S>, IoError> {
    serde_json::from_str::<CurveJson>(text)?.to_curve()
}

pub fn curve_to_json<S: Scalar>(curve: &PlCurve<S>) -> String {
    serde_json::to_string(&CurveJson::from_curve(curve)).expect("plain data serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub vertices: Vec<Vec<String>>,
    pub edges: Vec<[usize; 2]>,
}

impl ComplexJson {
    pub fn from_complex<S: Scalar>(complex: &ImageComplex<S>) -> Self {
        ComplexJson {
            vertices: complex.vertices().iter().map(|v| literals(v.coords())).collect(),
            edges: complex.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_complex<S: Scalar>(&self) -> Result<ImageComplex<S>, IoError> {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let coords = row
                    .iter()
                    .map(|t| parse_number(t, || format!("complex vertex {i}")))
                    .collect::<Result<Vec<S>, _>>()?;
                Ok(Point::new(coords))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        let count = vertices.len();
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            if let Some(&vertex) = [a, b].iter().find(|&&v| v >= count) {
                return Err(IoError::BadEdge { edge: e, vertex, count });
            }
        }
        Ok(ImageComplex::from_parts(vertices, self.edges.iter().map(|&[a, b]| (a, b)).collect()))
    }
}

pub fn parse_complex<S: Scalar>(text: &str) -> Result<ImageComplex<S>, IoError> {
    serde_json::from_str::<ComplexJson>(text)?.to_complex()
}

pub fn complex_to_json<S: Scalar>(complex: &ImageComplex<S>) -> String {
    serde_json::to_string(&ComplexJson::from_complex(complex)).expect("plain data serializes")
}

/// A circle map as breakpoints in `[0, 1)`, the lift at each, and the degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleMapJson {
    pub breakpoints: Vec<String>,
    pub lifts: Vec<String>,
    pub degree: i64,
}

impl CircleMapJson {
    pub fn from_map<S: Scalar>(f: &PlCircleMap<S>) -> Self {
        CircleMapJson { breakpoints: literals(f.breakpoints()), lifts: literals(f.lift_values()), degree: f.degree() }
    }

    pub fn to_map<S: Scalar>(&self) -> Result<PlCircleMap<S>, IoError> {
        let parse = |v: &[String], what: &str| {
            v.iter().enumerate().map(|(i, t)| parse_number(t, || format!("{what} {i}"))).collect::<Result<Vec<S>, _>>()
        };
        Ok(PlCircleMap::new(parse(&self.breakpoints, "breakpoint")?, parse(&self.lifts, "lift")?, self.degree)?)
    }
}

pub fn parse_circle_map<S: Scalar>(text: &str) -> Result<PlCircleMap<S>, IoError> {
    serde_json::from_str::<CircleMapJson>(text)?.to_map()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusCurveJson {
    pub first: CircleMapJson,
    pub second: CircleMapJson,
}

impl TorusCurveJson {
    pub fn from_curve<S: Scalar>(c: &TorusCurve<S>) -> Self {
        TorusCurveJson { first: CircleMapJson::from_map(c.first()), second: CircleMapJson::from_map(c.second()) }
    }

    pub fn to_curve<S: Scalar>(&self) -> Result<TorusCurve<S>, IoError> {
        Ok(TorusCurve::new(self.first.to_map()?, self.second.to_map()?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainPointJson {
    pub parameter: String,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualJson {
    /// 1-based.
    pub axis: usize,
    pub difference: Vec<String>,
    pub off_axis: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub diagonal_parameter: String,
    pub circle_points: Vec<String>,
    pub link_gaps: Vec<String>,
    pub inner_degree: [i64; 2],
    pub inner_k: i64,
    pub degree: [i64; 2],
    pub k: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub epsilon: Option<String>,
    pub chain: ChainJson,
    pub points: Vec<ChainPointJson>,
    pub residuals: Vec<ResidualJson>,
    pub residual_sum: Vec<String>,
}

impl CertificateJson {
    pub fn from_certificate<S: Scalar>(cert: &FixedPointCertificate<S>) -> Self {
        let chain: &TripleChain<S> = &cert.chain;
        let point =
            |p: &ChainPoint<S>| ChainPointJson { parameter: p.parameter.to_literal(), coords: literals(&p.coords) };
        let residual = |r: &Residual<S>| ResidualJson {
            axis: r.axis.index() + 1,
            difference: literals(&r.difference),
            off_axis: r.off_axis.to_literal(),
        };
        CertificateJson {
            epsilon: cert.epsilon.as_ref().map(Scalar::to_literal),
            chain: ChainJson {
                diagonal_parameter: chain.diagonal_parameter.to_literal(),
                circle_points: literals(&chain.circle_points),
                link_gaps: literals(&chain.link_gaps),
                inner_degree: [chain.inner_degree.0, chain.inner_degree.1],
                inner_k: chain.inner_k,
                degree: [chain.degree.0, chain.degree.1],
                k: chain.k,
            },
            points: cert.points.iter().map(point).collect(),
            residuals: cert.residuals.iter().map(residual).collect(),
            residual_sum: literals(&cert.residual_sum()),
        }
    }
}

pub fn certificate_to_json<S: Scalar>(cert: &FixedPointCertificate<S>) -> String {
    serde_json::to_string_pretty(&CertificateJson::from_certificate(cert)).expect("plain data serializes")
}
