use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operand shapes do not conform.
    #[error("shape error in {op}: operand `{operand}` is {found}, expected {expected}")]
    Shape {
        op: &'static str,
        operand: String,
        expected: String,
        found: String,
    },

    /// A rank bound lies outside its valid interval.
    #[error("constraint error: {what} = {got} is outside the valid interval [{lo}, {hi}]")]
    Constraint {
        what: String,
        lo: i64,
        hi: i64,
        got: i64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("field error: {0}")]
    Field(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A rank profile that no triple of matrices can have.
    #[error("inconsistent rank profile: {0}")]
    Consistency(String),

    /// The exhaustive enumeration would exceed its budget.
    #[error("enumeration of {required} matrices exceeds the cap of {cap}")]
    Budget { required: u128, cap: u128 },

    /// A construction failed its own verification. Always a bug, never expected input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn shape(
        op: &'static str,
        operand: impl Into<String>,
        expected: impl Into<String>,
        found: (usize, usize),
    ) -> Self {
        Error::Shape {
            op,
            operand: operand.into(),
            expected: expected.into(),
            found: format!("{}x{}", found.0, found.1),
        }
    }

    pub(crate) fn constraint(what: impl Into<String>, lo: usize, hi: usize, got: usize) -> Self {
        Error::Constraint {
            what: what.into(),
            lo: lo as i64,
            hi: hi as i64,
            got: got as i64,
        }
    }
}
