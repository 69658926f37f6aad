use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid model: {0}")]
    Semantic(String),

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("jet cap exceeded: order {order} > cap {cap}")]
    JetCap { order: u32, cap: u32 },

    #[error("prolongation budget exhausted at depth {depth}; last candidate: {candidate}")]
    Prolongation { depth: u32, candidate: String },

    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Semantic(_) => 2,
            Error::Budget(_) | Error::JetCap { .. } | Error::Prolongation { .. } => 3,
            Error::SelfCheck(_) => 4,
            Error::Invalid(_) => 1,
        }
    }
}
