use thiserror::Error;

use crate::syntax::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid identifier `{0}`")]
    InvalidName(String),

    #[error("`{0}` is reserved and cannot be used as a name")]
    ReservedName(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{rule}-rule not applicable: {reason}")]
    RuleNotApplicable {
        rule: &'static str,
        reason: &'static str,
    },

    #[error("branch is not complete: some expansion rule still applies")]
    BranchNotComplete,

    #[error("resource limit exceeded: more than {limit} {what}")]
    ResourceLimit { what: &'static str, limit: usize },

    #[error("malformed trace: {0}")]
    Trace(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
