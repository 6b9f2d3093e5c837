use thiserror::Error;

/// Errors raised by the solvers and analysis routines.
///
/// The variants split into precondition failures (the caller handed in data
/// the operation is not defined for) and numerical failures (an iteration or
/// refinement ran out of budget).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("compatibility error: corner values differ, f(0) = {f0}, g(0) = {g0}")]
    Compatibility { f0: f64, g0: f64 },
    #[error("support error: boundary data does not vanish at t = {at} (value {value:e})")]
    Support { at: f64, value: f64 },
    #[error("continuity error: traces differ by {gap:e} at {at} on the gluing line")]
    Continuity { at: f64, gap: f64 },
    #[error("alignment error: {0}")]
    Alignment(String),
    #[error("abscissa error: Re(zeta) = {re_zeta} does not exceed the growth abscissa {abscissa}")]
    Abscissa { re_zeta: f64, abscissa: f64 },
    #[error("metadata error: {0}")]
    Metadata(String),
    #[error("invalid specification: {0}")]
    Spec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that signal a violated precondition rather than a
    /// numerical failure or malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Compatibility { .. }
                | Error::Support { .. }
                | Error::Continuity { .. }
                | Error::Alignment(_)
                | Error::Abscissa { .. }
                | Error::Metadata(_)
                | Error::Spec(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
