use thiserror::Error;

use crate::report::VerificationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A denominator outside `2^a·3^b` was supplied to the exact ring.
    #[error("denominator {0} is not of the form 2^a*3^b")]
    Denominator(String),

    #[error("resource cap exceeded: {what} needs {requested} items, cap is {cap}")]
    Resource {
        what: String,
        requested: u128,
        cap: u128,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid group action: {reason} (witness {witness})")]
    InvalidAction { reason: String, witness: String },

    #[error("verification failed: {}", .0.summary())]
    Verification(Box<VerificationReport>),

    #[error("base point has a short stabilizing word {word}")]
    Stabilizer { word: String },

    #[error("no avoiding rotation among {tried} candidates: {detail}")]
    AvoidanceExhausted { tried: usize, detail: String },

    #[error("every coordinate axis meets the avoided set")]
    AxisSelection,

    #[error("induced map is not injective: {0}")]
    NotInjective(String),

    #[error("fixed-point iteration did not stabilize at depth {depth}: {detail}")]
    Unstable { depth: u32, detail: String },

    #[error("interface sets differ: {0}")]
    Interface(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported format {0:?}")]
    Format(String),
}

impl Error {
    /// A stable short name for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Denominator(_) => "denominator",
            Error::Resource { .. } => "resource",
            Error::Precondition(_) => "precondition",
            Error::InvalidAction { .. } => "invalid_action",
            Error::Verification(_) => "verification",
            Error::Stabilizer { .. } => "stabilizer",
            Error::AvoidanceExhausted { .. } => "avoidance_exhausted",
            Error::AxisSelection => "axis_selection",
            Error::NotInjective(_) => "not_injective",
            Error::Unstable { .. } => "unstable",
            Error::Interface(_) => "interface",
            Error::Parse(_) => "parse",
            Error::Format(_) => "format",
        }
    }

    /// Whether the error reports a failed check rather than bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::Verification(_)
                | Error::Stabilizer { .. }
                | Error::AvoidanceExhausted { .. }
                | Error::AxisSelection
                | Error::NotInjective(_)
                | Error::Unstable { .. }
        )
    }

    pub(crate) fn verification(report: VerificationReport) -> Self {
        Error::Verification(Box::new(report))
    }
}
