use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A model or instance document did not match its schema.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    /// An exhaustive enumeration or a node table would exceed its limit.
    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("variable {0} is not assigned by the instance")]
    Unassigned(usize),

    #[error("literals are over different variables ({0} and {1})")]
    VariableMismatch(usize, usize),

    #[error("invalid {what}: {message}")]
    Invalid { what: &'static str, message: String },

    #[error("term is not negative: indicator {0} appears positively")]
    NotNegative(String),

    #[error("term negates every indicator of variable `{0}` and is inconsistent with the exactly-one constraint")]
    InconsistentWithConstraint(String),

    #[error("unknown encoding scheme `{0}`")]
    UnknownScheme(String),

    #[error("operation requires the one_hot scheme, map uses `{0}`")]
    WrongScheme(&'static str),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, message: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            message: message.into(),
        }
    }

    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
