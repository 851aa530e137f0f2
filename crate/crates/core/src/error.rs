use thiserror::Error;

use crate::AgentId;

/// Errors raised by the unravelling library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("function support has {size} variables, above the brute-force cap of {cap}")]
    SupportTooLarge { size: usize, cap: usize },

    #[error("operation requires a monotone function")]
    NotMonotone,

    #[error("operation requires exactly two alternatives labelled \"0\" and \"1\", found {found:?}")]
    NonBinaryDomain { found: Vec<String> },

    #[error("operation requires exactly two alternatives, found {found}")]
    NotTwoAlternatives { found: usize },

    #[error("profile is not a valid {model} profile: {reason}")]
    InvalidProfile { model: &'static str, reason: String },

    #[error("the root is unreachable from vertices {stranded:?}")]
    RootUnreachable { stranded: Vec<usize> },

    #[error("certificate is inconsistent: delegation cycle through {cycle:?}")]
    InconsistentCertificate { cycle: Vec<AgentId> },

    #[error("certificate has {found} ranks for {expected} agents")]
    CertificateLength { expected: usize, found: usize },

    #[error("rank {rank} of agent {agent} is out of range 0..={max}")]
    RankOutOfRange { agent: AgentId, rank: usize, max: usize },

    #[error("search space of {size} exceeds the budget of {budget}; {hint}")]
    BudgetExceeded {
        size: u128,
        budget: u128,
        hint: &'static str,
    },

    #[error("profile function class {found} is outside the solver's class {expected}")]
    ClassMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown agent name {0:?}")]
    UnknownAgent(String),

    #[error("unknown alternative {0:?}")]
    UnknownAlternative(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
