use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("qubit index {index} out of range for {n} qubits")]
    Index { index: usize, n: usize },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("synthesis stuck: {0}")]
    Stuck(String),
    #[error("step limit of {0} exceeded")]
    StepLimit(usize),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("wiring error: {0}")]
    Wiring(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl ToString, message: impl ToString) -> Self {
        Error::Parse {
            location: location.to_string(),
            message: message.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
