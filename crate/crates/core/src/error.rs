use std::fmt;

use crate::matrix::Scale;
use crate::method::LinkageMethod;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single problem found while validating a [`DataMatrix`](crate::DataMatrix).
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Empty,
    ShapeMismatch { expected: usize, found: usize },
    MassCountMismatch { expected: usize, found: usize },
    LabelCountMismatch { expected: usize, found: usize },
    NonFinite { row: usize, column: usize },
    NonPositiveMass { row: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty matrix"),
            Violation::ShapeMismatch { expected, found } => {
                write!(f, "expected {expected} values, found {found}")
            }
            Violation::MassCountMismatch { expected, found } => {
                write!(f, "expected {expected} masses, found {found}")
            }
            Violation::LabelCountMismatch { expected, found } => {
                write!(f, "expected {expected} row labels, found {found}")
            }
            Violation::NonFinite { row, column } => {
                write!(f, "non-finite value at row {row}, column {column}")
            }
            Violation::NonPositiveMass { row } => write!(f, "non-positive mass at row {row}"),
        }
    }
}

/// Every violation found in one validation pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid data matrix: {0}")]
    Invalid(#[from] ValidationReport),
    #[error("self-pair ({0}, {0}) has no stored dissimilarity")]
    SelfPair(usize),
    #[error("index {index} out of range for {n} observations")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("condensed store of length {found} does not match n = {n} (expected {expected})")]
    CondensedLength { n: usize, expected: usize, found: usize },
    #[error("invalid dissimilarity {value} at condensed offset {offset}")]
    InvalidDissimilarity { offset: usize, value: f64 },
    #[error("member set is empty")]
    EmptyMembers,
    #[error("observation {0} appears in both clusters")]
    OverlappingClusters(usize),
    #[error("sample variance requires at least two members")]
    SampleVarianceOfSingleton,
    #[error("{what} requires {expected} dissimilarities, found {found}")]
    ScaleMismatch {
        what: String,
        expected: Scale,
        found: Scale,
    },
    #[error("at least {required} observations are required, found {found}")]
    TooFewObservations { required: usize, found: usize },
    #[error("{found} observations exceed the limit of {limit}")]
    TooManyObservations { limit: usize, found: usize },
    #[error("method {0} is not reducible; the nearest-neighbor chain cannot be used")]
    NonReducible(LinkageMethod),
    #[error("non-positive mass {0}")]
    NonPositiveMass(f64),
    #[error("{expected} masses expected, found {found}")]
    MassCount { expected: usize, found: usize },
    #[error("negative value {value} under the ward.D2 square root (input is not Euclidean)")]
    NegativeUnderRoot { value: f64 },
    #[error("negative height {height} at step {step} cannot be square-rooted")]
    NegativeHeight { step: usize, height: f64 },
    #[error("height transform {op} cannot be applied to a {scale} dendrogram")]
    HeightTransform { op: &'static str, scale: &'static str },
    #[error("dendrogram has inversions at steps {0:?}")]
    Inversions(Vec<usize>),
    #[error("leaf count mismatch: {0} vs {1}")]
    LeafCountMismatch(usize, usize),
    #[error("dendrogram topologies differ")]
    TopologyMismatch,
    #[error("height lists differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("correlation undefined: zero variance")]
    ZeroVariance,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid dendrogram: {0}")]
    InvalidDendrogram(String),
    #[error("unknown linkage method {0:?}")]
    UnknownMethod(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
