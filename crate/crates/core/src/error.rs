use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different number fields")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("linear form is zero")]
    ZeroForm,
    #[error("vector is zero")]
    ZeroVector,
    #[error("quadratic form is degenerate")]
    DegenerateQ,
    #[error("linear form L is zero")]
    ZeroL,
    #[error("restriction of Q to {{L = 0}} is not indefinite")]
    RestrictionNotIndefinite,
    #[error("exact mode requires a declared number field (input was given in float mode)")]
    NoFieldDeclared,
    #[error("generator {0} is singular")]
    SingularGenerator(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("reduction failed at depth {depth}: no admissible hyperplane within the search budget")]
    ReductionFailed { depth: usize },
    #[error("integer overflow risk: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
