use std::fmt;

/// Error type shared by all solvers in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    Domain(String),
    /// An argument is valid mathematically but outside the supported
    /// numerical working range.
    Range(String),
    /// A profile document failed validation; the message names the field.
    Profile(String),
    /// A root could not be bracketed where one was expected.
    Bracketing(String),
    /// An iteration failed to reach its tolerance; carries what was achieved.
    Convergence { what: String, achieved: f64, requested: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Range(msg) => write!(f, "range error: {msg}"),
            Error::Profile(msg) => write!(f, "invalid profile: {msg}"),
            Error::Bracketing(msg) => write!(f, "bracketing failure: {msg}"),
            Error::Convergence { what, achieved, requested } => write!(
                f,
                "{what} did not converge: achieved {achieved:.3e}, requested {requested:.3e}"
            ),
        }
    }
}

impl std::error::Error for Error {}

/// Whether this error indicates bad input (as opposed to a solver failure).
impl Error {
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Range(_) | Error::Profile(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
