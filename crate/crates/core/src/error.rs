use thiserror::Error;

/// Failures surfaced by the pipeline.
///
/// Genericity failures carry the id of the failing check so the caller can
/// resample and the certificate can record what went wrong.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an admissible prime (need 5 <= p < 2^61)")]
    InvalidPrime(u64),
    #[error("seed is not generic: check `{check}` failed")]
    SeedNotGeneric { check: String },
    #[error("point is not generic: {0}")]
    NonGenericPoint(String),
    #[error("plane is not generic: quadric space stabilized at dimension {0}")]
    NonGenericPlane(usize),
    #[error("point lies on the base locus (all quadrics vanish)")]
    OnBaseLocus,
    #[error("invariant line is contained in the threefold")]
    LineInX,
    #[error("point lies on the rank <= 6 locus (kernel has dimension {0})")]
    PointOnPeskine(usize),
    #[error("line is contained in the rank <= 6 locus")]
    DegenerateLine,
    #[error("point is not on the rank <= 6 locus (rank {0})")]
    NotOnPeskine(usize),
    #[error("tensor is not alternating: worst violation at ({}, {}, {})", .triple.0, .triple.1, .triple.2)]
    NotAlternating { triple: (usize, usize, usize) },
    #[error("randomized rank sketches disagree ({0} vs {1})")]
    SketchDisagreement(usize, usize),
    #[error("no Hilbert function plateau below degree {0}")]
    Inconclusive(usize),
    #[error("inconsistent interpolation data: {0}")]
    Inconsistent(String),
    #[error("binary form is identically zero")]
    ZeroForm,
    #[error("state mismatch: {0}")]
    StateMismatch(String),
    #[error("missing prerequisite: {0}")]
    Missing(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn not_generic(check: &str) -> Error {
    Error::SeedNotGeneric {
        check: check.to_string(),
    }
}
