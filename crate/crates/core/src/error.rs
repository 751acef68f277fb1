use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("objective has no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("root solver did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("no interior links: margin {0} leaves an empty measurement region")]
    NoInteriorLinks(f64),

    #[error("link {0} is not scheduled in this slot")]
    InactiveLink(usize),

    #[error("equilibrium utility is zero; price of anarchy undefined")]
    ZeroEquilibriumUtility,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by bad input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Divergent(_)
                | Error::NoInteriorLinks(_)
                | Error::InactiveLink(_)
        )
    }
}
