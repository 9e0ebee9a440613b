use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} = {got} exceeds the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        got: u64,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("received word is inconsistent with every codeword on its non-erased positions")]
    Inconsistent,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Precondition, domain and cap violations are caller errors; the rest
    /// indicate bad input data or an internal failure.
    pub fn is_caller_error(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::Precondition(_)
                | Error::CapExceeded { .. }
                | Error::LengthMismatch { .. }
                | Error::NoSolution(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
