use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("pole at t = 0 (order {0})")]
    PoleAtZero(i32),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("expression is not linear in `{0}`")]
    Nonlinear(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a non-constant expression")]
    NonConstantDivisor,
    #[error("negative exponent on a non-monomial")]
    NegativeExponent,
}

impl SymbolicError {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        SymbolicError::Parse {
            column,
            message: message.into(),
        }
    }
}
