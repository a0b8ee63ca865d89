use thiserror::Error;

/// Errors raised by the arithmetic, set algebra, verification and CLI layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LfwError {
    #[error("unsupported field parameters: {0}")]
    UnsupportedField(String),

    #[error("modulus {0:?} is not a monic irreducible polynomial of the requested degree")]
    ReducibleModulus(Vec<u32>),

    #[error("operands belong to different fields")]
    ConfigMismatch,

    #[error("division by zero in GF(q)")]
    ZeroInverse,

    #[error("element out of range for this field: {0}")]
    ElementOutOfRange(String),

    #[error("element {0} has a digit at a non-negative exponent")]
    NotFractional(String),

    #[error("cannot add cyclotomic scalars with q-grades {0} and {1}")]
    GradeMismatch(i32, i32),

    #[error("sign of real cyclotomic value {0} is not decidable at working precision")]
    UndecidableSign(String),

    #[error("set is unbounded")]
    Unbounded,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("support escapes the model window: {0}")]
    WindowEscape(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("{line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("{0}")]
    Runtime(String),
}

pub type Result<T> = std::result::Result<T, LfwError>;
