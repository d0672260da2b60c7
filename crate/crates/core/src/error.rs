use thiserror::Error;

/// Failure modes shared by every module. Each variant maps to a CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("resource ceiling exceeded: {0}")]
    Resource(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Contract(_) | Error::Io(_) | Error::Json(_) => 2,
            Error::Resource(_) => 3,
            Error::Numerical(_) => 4,
            Error::Verification(_) => 5,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Usage(_) => "usage",
            Error::Contract(_) => "contract",
            Error::Resource(_) => "resource",
            Error::Numerical(_) => "numerical",
            Error::Verification(_) => "verification",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Size ceilings applied throughout. Defaults keep every corpus case at desk scale.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    pub max_group_order: usize,
    pub max_aut_order: usize,
    pub max_nnz: usize,
    pub max_irrep_order: usize,
    pub max_enumeration: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_group_order: 64,
            max_aut_order: 24,
            max_nnz: 200_000,
            max_irrep_order: 16,
            max_enumeration: 1 << 20,
        }
    }
}
