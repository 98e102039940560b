use std::io;
use std::path::PathBuf;

use functor_he::bnf_distinguish::DistinguishError;
use functor_he::proof_lang::ProofError;
use functor_he::quotient_he::QuotientError;
use functor_he::subgroup_he::SubgroupError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Params(String),
    #[error("{0}")]
    Crypto(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Params(_) => 2,
            CliError::Crypto(_) => 3,
            CliError::Parse(_) => 4,
            CliError::Budget(_) => 5,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<QuotientError> for CliError {
    fn from(e: QuotientError) -> Self {
        match e {
            QuotientError::Params(_) | QuotientError::Range { .. } => {
                CliError::Params(e.to_string())
            }
            QuotientError::EmptySum => CliError::Usage(e.to_string()),
            QuotientError::InvalidKey(_) => CliError::Parse(e.to_string()),
            QuotientError::UnknownLabel(_)
            | QuotientError::NotAShiftClass(_)
            | QuotientError::UndefinedComposition(..) => CliError::Crypto(e.to_string()),
        }
    }
}

impl From<SubgroupError> for CliError {
    fn from(e: SubgroupError) -> Self {
        match e {
            SubgroupError::Params(_) | SubgroupError::Randomness { .. } => {
                CliError::Params(e.to_string())
            }
            SubgroupError::Arity { .. } => CliError::Usage(e.to_string()),
            SubgroupError::Formula(_) => CliError::Parse(e.to_string()),
            SubgroupError::Element { .. } => CliError::Crypto(e.to_string()),
        }
    }
}

impl From<DistinguishError> for CliError {
    fn from(e: DistinguishError) -> Self {
        match e {
            DistinguishError::InvalidGraph(_) | DistinguishError::Parse { .. } => {
                CliError::Parse(e.to_string())
            }
            DistinguishError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            DistinguishError::NoTrials => CliError::Params(e.to_string()),
            DistinguishError::InvalidQuotient(_) => CliError::Crypto(e.to_string()),
            DistinguishError::Adversary { source, .. } => CliError::from(*source),
        }
    }
}

impl From<ProofError> for CliError {
    fn from(e: ProofError) -> Self {
        match e {
            ProofError::Syntax { .. }
            | ProofError::Scope { .. }
            | ProofError::InputTooLarge { .. }
            | ProofError::UnboundVariable(_)
            | ProofError::TypeMismatch { .. }
            | ProofError::InvalidConstant { .. } => CliError::Parse(e.to_string()),
            ProofError::FuelExhausted { .. } | ProofError::DenotationTooLarge { .. } => {
                CliError::Budget(e.to_string())
            }
            ProofError::ModulusMismatch { .. } => CliError::Params(e.to_string()),
            ProofError::NotEncryptable { .. }
            | ProofError::NotAShift { .. }
            | ProofError::Semantics(_) => CliError::Crypto(e.to_string()),
            ProofError::Quotient(inner) => CliError::from(inner),
        }
    }
}
