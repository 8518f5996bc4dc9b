use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed complex literal at position {position}: {message}")]
    Parse { position: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("determinant of a {dim}x{dim} polynomial matrix is not supported (limit {limit}); use the nilpotency test instead")]
    UnsupportedSize { dim: usize, limit: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("evaluation point has {got} coordinates, expected {expected}")]
    PointLength { got: usize, expected: usize },
    #[error("map is not of the form X + (terms of degree >= 2)")]
    NotIdentityPlusHigher,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("supplied inverse does not invert the reduced map exactly")]
    UnverifiedInverse,
    #[error("lifted map failed to invert the original map")]
    LiftFailed,
    #[error("dimension {0} is outside the supported range (n <= 9)")]
    OutOfScope(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Errors from matrix / config text input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("expected {expected} at {location}")]
    Structure { location: String, expected: String },
    #[error("bad literal at {location}: {source}")]
    Literal { location: String, source: ScalarError },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
    #[error("unknown example {name:?}; available: {available}")]
    UnknownExample { name: String, available: String },
}

impl InputError {
    pub(crate) fn from_json(err: &serde_json::Error) -> Self {
        InputError::Json { line: err.line(), column: err.column(), message: err.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("enumeration would visit {count} candidates, above the ceiling of {ceiling}")]
    CeilingExceeded { count: u128, ceiling: u128 },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Input(#[from] InputError),
}
