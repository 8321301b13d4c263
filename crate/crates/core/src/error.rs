use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty input")]
    Empty,
    #[error("duplicate vertex {label:?} in facet {facet}")]
    DuplicateVertex { label: String, facet: usize },
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<String>),
    #[error("label {0:?} is already a vertex")]
    LabelInUse(String),
    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),
    #[error("complex is not pure")]
    Impure,
    #[error("not a pseudo-manifold: {0}")]
    NotPseudoManifold(String),
    #[error("poset is not graded: cell {0} has a cover of the wrong dimension")]
    NotGraded(usize),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("signed coefficients need a simplicial complex; subdivide the poset with order_complex first")]
    SignedOnPoset,
    #[error("invalid knot spec: {0}")]
    InvalidKnot(String),
    #[error("tube perforates the bottom layer at cube {0:?}")]
    Perforation([i32; 3]),
    #[error("invalid pile: {0}")]
    InvalidPile(String),
    #[error("cell {0} is matched twice")]
    MatchedTwice(usize),
    #[error("pair ({0}, {1}) is not a cover relation")]
    NotACover(usize, usize),
    #[error("matching has a closed V-path through cells {0:?}")]
    Cycle(Vec<usize>),
    #[error("matching pairs boundary cell {0}")]
    NotBoundaryCritical(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("dimension {0} is too small for this construction")]
    DimensionTooSmall(isize),
    #[error("input is closed; use the polar variant")]
    ClosedInput,
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("gluing failed: {0}")]
    Gluing(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
