use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the zero polynomial has no initial exponent")]
    ZeroPolynomial,
    #[error("coordinate change matrix is singular")]
    SingularMatrix,
    #[error("invalid positive linear form: {0}")]
    InvalidForm(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("resource limit exceeded: {bound} = {value} > {limit}")]
    ResourceLimit {
        bound: &'static str,
        limit: usize,
        value: usize,
    },
    #[error("the ideal is the unit ideal")]
    UnitIdeal,
    #[error("map component {index} does not vanish at the origin")]
    MapNotAtOrigin { index: usize },
    #[error("a map germ needs at least one component")]
    EmptyMap,
    #[error("the map germ is not flat at the origin (fibre dimension {fibre_dimension}, expected {expected})")]
    NotFlat { fibre_dimension: i64, expected: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
