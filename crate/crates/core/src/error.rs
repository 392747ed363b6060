use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown builtin model {0:?} (expected one of cp1, cp2, cp3, blp_cp2, p1xp1)")]
    UnknownModel(String),

    #[error("arity mismatch: expected {expected} classes, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("class has {got} coefficients but the basis has {expected}")]
    ClassLength { expected: usize, got: usize },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("central charge vanishes on [1, +inf): {0}")]
    NotCertified(String),

    #[error("borderline comparison inside the indeterminate band: {0}")]
    Indeterminate(String),

    #[error("inconsistent theta_0: {0}")]
    InconsistentTheta0(String),

    #[error("SOUNDNESS BUG: {0}")]
    SoundnessBug(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("class is not Kähler over the model family: {0}")]
    NonKahler(String),

    #[error("matrix is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inadmissible configuration: {0}")]
    Inadmissible(String),

    #[error("solver failure: {0}")]
    Solver(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
