use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The representation (or a closed form) is singular at this point.
    #[error("pole at {at}: {what}")]
    Pole { what: &'static str, at: f64 },

    #[error("invalid braid word: {0}")]
    InvalidWord(String),

    #[error("exact division failed: {0}")]
    InexactDivision(String),

    #[error("word has {crossings} crossings, limit is {limit}")]
    SizeLimit { crossings: usize, limit: usize },

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("path system is singular at k = {k}")]
    SingularSystem { k: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit status: 2 for bad input, 3 for poles and size limits.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Pole { .. } | Error::SizeLimit { .. } | Error::SingularSystem { .. } | Error::InexactDivision(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
