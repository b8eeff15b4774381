use thiserror::Error;

use crate::diagram::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator vanishes at L = 1 while the numerator does not")]
    PoleAtOne,
    #[error("diagram has decorated arrowheads; multiplicities must be cached")]
    DecoratedArrowPresent,
    #[error("cached multiplicities of node {node} are ({cached_n}, {cached_nu}) but the diagram gives ({n}, {nu})")]
    CacheMismatch {
        node: String,
        cached_n: u64,
        cached_nu: i64,
        n: u64,
        nu: i64,
    },
    #[error("node {0} has no cached multiplicities")]
    MissingCache(String),
    #[error("interpolated multiplicity at ({0}, {1}) is not integral")]
    NonIntegralInterpolation(i64, i64),
    #[error("vector ({0}, {1}) is not primitive")]
    NonPrimitiveInput(i64, i64),
    #[error("cone determinant {0} is not positive")]
    NegativeDeterminant(i64),
    #[error("degenerate denominator: multiplicity pair (N, nu) = (0, 0)")]
    DegenerateDenominator,
    #[error("degenerate branch: (N, nu) = (0, 0)")]
    DegenerateBranch,
    #[error("{0} and {1} are not joined by an edge")]
    NotAnEdge(String, String),
    #[error("no arrowhead with N >= 1")]
    NoFArrow,
    #[error("Delta_1 has negative multiplicity {multiplicity} at exp(2 pi i {class})")]
    NonPolynomialDelta1 { class: String, multiplicity: i64 },
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("arrowhead index {0} out of range")]
    UnknownArrow(usize),
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("subdivision is not a smooth chain between the cone vectors: {0}")]
    BadSubdivision(String),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}
