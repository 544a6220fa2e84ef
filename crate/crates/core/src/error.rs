use thiserror::Error;

/// Error kinds shared by every layer of the simulator.
///
/// The variants line up with the CLI exit-code contract: `Domain`,
/// `Contract`, `Config` and `NoCrossing` are usage problems (exit 2),
/// `Io` is exit 3 and `Resource` is exit 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("singular measurement: {0}")]
    Singular(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("no threshold crossing: {0}")]
    NoCrossing(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// Process exit code for this error under the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::Resource(_) => 4,
            _ => 2,
        }
    }
}
