use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown character {ch:?} (U+{code:04X}) at part {part}, stanza {stanza}, line {line}, column {col}")]
    UnknownChar {
        ch: char,
        code: u32,
        part: u32,
        stanza: u32,
        line: u32,
        col: u32,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("context {context} never occurs; its transition probability is undefined")]
    ZeroContext { context: String },

    #[error("domain error in {quantity}: {message}")]
    Domain {
        quantity: &'static str,
        message: String,
    },

    #[error("rank-deficient design: {0}")]
    RankDeficient(String),

    #[error("n-gram order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("malformed table: {0}")]
    Table(String),
}

impl Error {
    /// Numeric failures (poles, singular systems, undefined estimates) as
    /// opposed to problems with the input data or configuration.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::ZeroContext { .. } | Error::Domain { .. } | Error::RankDeficient(_)
        )
    }

    pub(crate) fn domain(quantity: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            quantity,
            message: message.into(),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Table(err.to_string())
    }
}
