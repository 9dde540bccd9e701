use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("exponent {0} appears more than once")]
    DuplicateExponent(String),
    #[error("division by zero")]
    ZeroDivision,
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("element is not in the valuation ring")]
    NotInRing,
    #[error("leading coefficient {0} is not the square of a rational")]
    NotASquare(String),
    #[error("square root of a negative element")]
    NegativeInput,
    #[error("vector is not a root")]
    NotARoot,
    #[error("enumeration exceeded the bound of {0}")]
    EnumerationBound(usize),
    #[error("constraint is not of difference form")]
    UnsupportedConstraint,
    #[error("no single optimal permutation covers the overlap")]
    AmbiguousWeyl,
    #[error("operation needs a non-identity root element")]
    IdentityElement,
    #[error("matrix is not upper unipotent")]
    NotUnipotent,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precision(msg: impl Into<String>) -> Error {
    Error::Precision(msg.into())
}
