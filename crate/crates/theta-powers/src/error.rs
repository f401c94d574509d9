use thiserror::Error;

/// Failures surfaced by the library; the CLI maps them onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("divergent series: {0}")]
    Divergence(String),
    #[error("scale limit: {0}")]
    Scale(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("cannot certify {0} as nonzero")]
    UncertifiedNonzero(String),
    #[error("precision ceiling of {digits} digits reached while {context}")]
    PrecisionCeiling { digits: u32, context: String },
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("contradiction: {0}")]
    Contradiction(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
