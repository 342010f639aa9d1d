use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid genus {0}: genus must be at least 1")]
    InvalidGenus(i64),
    #[error("variable-set mismatch: genus {left} vs genus {right}")]
    GenusMismatch { left: u32, right: u32 },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("unsupported divisor: leading coefficient is not a rational constant")]
    UnsupportedDivisor,
    #[error("index {index} out of range {range}")]
    IndexOutOfRange { index: i64, range: String },
    #[error("lambda_{0} is not a parameter of the genus-{1} model")]
    LambdaOutOfModel(i64, u32),
    #[error("recurrence not applicable for k = {0} (needs k >= 3)")]
    RecurrenceNotApplicable(u32),
    #[error("basis degenerate: generators are linearly dependent in weight {0}")]
    BasisDegenerate(i64),
    #[error("vector field is not in the polynomial span of the generators")]
    NotInSpan,
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),
    #[error("operator of differential order {0} is not supported here")]
    UnsupportedOrder(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("atom `{atom}` is not valid here: {msg}")]
    Atom { atom: String, msg: String },
    #[error("fixture error (line {line}): {msg}")]
    Fixture { line: usize, msg: String },
    #[error("json error: {0}")]
    Json(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
