use thiserror::Error;

use crate::profile::Profile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The quadruple cannot be trisection data: parity failure or a negative surface genus.
    #[error("Infeasible: {profile} has no nonnegative integer surface genera")]
    Infeasible { profile: Profile },

    /// No nonseparating arc class (or formal inverse) of the requested kind exists.
    #[error("IllegalMove{}: {reason}", step.map(|k| format!(" at step {k}")).unwrap_or_default())]
    IllegalMove { step: Option<usize>, reason: String },

    #[error("TrivialInput: the trivial trisection admits no stabilization")]
    TrivialInput,

    #[error("InfeasibleInput: {0}")]
    InfeasibleInput(String),

    #[error("OutOfDomain: {constructor}: {reason}")]
    OutOfDomain {
        constructor: &'static str,
        reason: String,
    },

    /// A loaded state or script violates a structural invariant.
    #[error("InvalidState: {0}")]
    InvalidState(String),

    #[error("Format: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn illegal(reason: impl Into<String>) -> Self {
        Error::IllegalMove {
            step: None,
            reason: reason.into(),
        }
    }

    /// Stable error name, as printed on standard error by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Infeasible { .. } => "Infeasible",
            Error::IllegalMove { .. } => "IllegalMove",
            Error::TrivialInput => "TrivialInput",
            Error::InfeasibleInput(_) => "InfeasibleInput",
            Error::OutOfDomain { .. } => "OutOfDomain",
            Error::InvalidState(_) => "InvalidState",
            Error::Format(_) => "Format",
        }
    }

    /// Domain errors come from the move calculus itself; the rest are input problems.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Infeasible { .. }
                | Error::IllegalMove { .. }
                | Error::TrivialInput
                | Error::InfeasibleInput(_)
                | Error::OutOfDomain { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
