//! JSON formats for complexes, angles, shears, patterns and hull input.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::admissibility::AngleFunction;
use crate::develop::CirclePattern;
use crate::hyp::{CPoint, HypError, Isometry, OrientedCircle, C64};
use crate::surface::{CellComplex, ComplexError};
use crate::teich::ShearPoint;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Hyp(#[from] HypError),
    #[error("invalid point {0:?}")]
    BadPoint(String),
}

/// `{ "genus": g, "faces": [[signed edge ids], ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub genus: usize,
    pub faces: Vec<Vec<i64>>,
}

impl ComplexFile {
    pub fn from_complex(c: &CellComplex) -> Self {
        ComplexFile { genus: c.genus(), faces: c.to_gluing() }
    }

    pub fn build(&self) -> Result<CellComplex, ComplexError> {
        CellComplex::from_gluing(&self.faces, Some(self.genus))
    }
}

pub fn parse_complex(s: &str) -> Result<CellComplex, IoError> {
    let f: ComplexFile = serde_json::from_str(s)?;
    Ok(f.build()?)
}

pub fn complex_to_json(c: &CellComplex) -> String {
    to_pretty(&ComplexFile::from_complex(c))
}

/// `{ "theta": { "<edge-id>": {"pi_rational": [p, q]} | {"radians": x} } }`.
pub fn parse_theta(s: &str) -> Result<AngleFunction, IoError> {
    Ok(serde_json::from_str(s)?)
}

pub fn theta_to_json(t: &AngleFunction) -> String {
    to_pretty(t)
}

/// `{ "shears": { "<edge-id>": s } }`.
pub fn parse_shears(s: &str) -> Result<ShearPoint, IoError> {
    Ok(serde_json::from_str(s)?)
}

pub fn shears_to_json(s: &ShearPoint) -> String {
    to_pretty(s)
}

/// A point of the Riemann sphere: `[re, im]`, a real number, or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRepr {
    Pair([f64; 2]),
    Real(f64),
    Token(Token),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Token {
    #[serde(rename = "inf")]
    Inf,
}

impl From<CPoint> for PointRepr {
    fn from(p: CPoint) -> Self {
        match p {
            CPoint::Finite(z) => PointRepr::Pair([z.re, z.im]),
            CPoint::Infinity => PointRepr::Token(Token::Inf),
        }
    }
}

impl PointRepr {
    pub fn to_point(self) -> Result<CPoint, IoError> {
        let p = match self {
            PointRepr::Pair([re, im]) => CPoint::new(re, im),
            PointRepr::Real(re) => CPoint::new(re, 0.0),
            PointRepr::Token(Token::Inf) => CPoint::Infinity,
        };
        match p {
            CPoint::Finite(z) if !z.re.is_finite() || !z.im.is_finite() => Err(IoError::BadPoint(format!("{self:?}"))),
            _ => Ok(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum PointsInput {
    Bare(Vec<PointRepr>),
    Wrapped { points: Vec<PointRepr> },
}

/// Hull input: a list of points, bare or under `"points"`.
pub fn parse_points(s: &str) -> Result<Vec<CPoint>, IoError> {
    let input: PointsInput = serde_json::from_str(s)?;
    let list = match input {
        PointsInput::Bare(v) | PointsInput::Wrapped { points: v } => v,
    };
    list.into_iter().map(PointRepr::to_point).collect()
}

/// A 2x2 complex matrix as `[[re, im]; 4]` in row order.
pub type MatrixRepr = [[f64; 2]; 4];

pub fn matrix_repr(m: &Isometry) -> MatrixRepr {
    m.as_array()
}

pub fn matrix_from_repr(r: &MatrixRepr) -> Result<Isometry, IoError> {
    let c = |v: [f64; 2]| C64::new(v[0], v[1]);
    Ok(Isometry::from_matrix(crate::hyp::Mat2::new(c(r[0]), c(r[1]), c(r[2]), c(r[3])))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorRepr {
    pub label: u64,
    pub matrix: MatrixRepr,
}

/// Serialized circle pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternFile {
    /// Normalized Hermitian tuples `(a, b_re, b_im, c)`, one per face.
    pub circles: Vec<[f64; 4]>,
    pub vertices: Vec<PointRepr>,
    /// Vertex indices per face, in face order.
    pub faces: Vec<Vec<usize>>,
    /// Deck maps of non-tree edges; empty for sphere patterns.
    pub generators: Vec<GeneratorRepr>,
}

impl PatternFile {
    pub fn from_pattern(p: &CirclePattern) -> Self {
        let c = &p.complex;
        let mut generators = Vec::new();
        if !p.global {
            for e in 0..c.num_edges() {
                let d = c.edge_dart(e);
                if p.decks[d].distance_from_identity() > 1e-9 {
                    generators.push(GeneratorRepr { label: c.label(d), matrix: matrix_repr(&p.decks[d]) });
                }
            }
        }
        PatternFile {
            circles: p.circles.iter().map(|k| k.as_array()).collect(),
            vertices: p.vertex_points.iter().map(|&v| v.into()).collect(),
            faces: (0..c.num_faces()).map(|f| c.face_darts(f).iter().map(|&d| c.tail(d)).collect()).collect(),
            generators,
        }
    }

    pub fn circles(&self) -> Result<Vec<OrientedCircle>, IoError> {
        self.circles.iter().map(|&a| Ok(OrientedCircle::from_array(a)?)).collect()
    }

    pub fn points(&self) -> Result<Vec<CPoint>, IoError> {
        self.vertices.iter().map(|p| p.to_point()).collect()
    }

    pub fn generator_maps(&self) -> Result<Vec<Isometry>, IoError> {
        self.generators.iter().map(|g| matrix_from_repr(&g.matrix)).collect()
    }
}

pub fn parse_pattern(s: &str) -> Result<PatternFile, IoError> {
    Ok(serde_json::from_str(s)?)
}

/// Pretty JSON with a trailing newline. Struct fields keep declaration order
/// and maps are sorted, so output is stable.
pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let c = parse_complex(r#"{"genus": 2, "faces": [[1, 2, -1, -2, 3, 4, -3, -4]]}"#).unwrap();
        assert_eq!(parse_complex(&complex_to_json(&c)).unwrap(), c);
        assert!(matches!(parse_complex(r#"{"genus": 1, "faces": [[1, 2, -1, -2, 3, 4, -3, -4]]}"#), Err(IoError::Complex(_))));
        assert!(matches!(parse_complex("{"), Err(IoError::Json(_))));
    }

    #[test]
    fn theta_format() {
        let t = parse_theta(r#"{"theta": {"1": {"pi_rational": [1, 2]}, "2": {"radians": 0.5}}}"#).unwrap();
        assert_eq!(t.get(1).unwrap(), crate::admissibility::AngleValue::pi_rational(1, 2));
        assert_eq!(parse_theta(&theta_to_json(&t)).unwrap(), t);
    }

    #[test]
    fn points_format() {
        let p = parse_points(r#"[[0, 0], "inf", 1.5, [0, -1]]"#).unwrap();
        assert_eq!(p[1], CPoint::Infinity);
        assert_eq!(p[2], CPoint::new(1.5, 0.0));
        let q = parse_points(r#"{"points": ["inf"]}"#).unwrap();
        assert_eq!(q, vec![CPoint::Infinity]);
        assert!(parse_points(r#"["nan"]"#).is_err());
    }

    #[test]
    fn shears_format() {
        let s = parse_shears(r#"{"shears": {"3": 1.25}}"#).unwrap();
        assert_eq!(s.get(3), Some(1.25));
        assert_eq!(parse_shears(&shears_to_json(&s)).unwrap(), s);
    }
}
