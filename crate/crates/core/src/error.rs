use thiserror::Error;

use crate::graph::{NodeId, Timestamp};

#[derive(Debug, Error)]
pub enum TgxError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("stale timestamp {t}: state already advanced to {clock}")]
    StaleTimestamp { t: Timestamp, clock: Timestamp },

    #[error("batch mixes timestamps {expected} and {found}")]
    MixedBatch { expected: Timestamp, found: Timestamp },

    #[error("self-loop event on node {0} is not supported")]
    SelfLoop(NodeId),

    #[error("multiset bound violated: {0}")]
    BoundViolation(String),

    #[error("exponent not exactly representable: {0}")]
    NonRepresentable(String),

    #[error("positional store required when positional features are enabled")]
    MissingPositional,

    #[error("unsupported configuration: {0}")]
    Config(String),

    #[error("model `{0}` does not support this query")]
    UnknownModel(String),

    #[error("unknown corpus case `{0}`")]
    UnknownCase(String),

    #[error("events must be synchronous (got t={0} and t={1})")]
    AsyncQuery(Timestamp, Timestamp),

    #[error("numeric comparison is ambiguous: max deviation {0:e} lies between tolerances")]
    NumericAmbiguous(f64),

    #[error("positional count overflow")]
    Overflow,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, TgxError>;
