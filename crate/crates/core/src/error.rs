//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A symbol outside the accepted amino-acid alphabet.
    #[error("unknown residue '{symbol}' at position {position}")]
    UnknownResidue { symbol: char, position: usize },

    /// A residue with no entry in the hydrophobicity table in use.
    #[error("residue '{symbol}' at position {position} has no hydrophobicity entry")]
    MissingHydrophobicity { symbol: char, position: usize },

    #[error("empty sequence")]
    EmptySequence,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("length mismatch: {targets} targets vs {predictions} predictions")]
    LengthMismatch { targets: usize, predictions: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// Pearson correlation is undefined for a constant series.
    #[error("constant series: correlation undefined")]
    ConstantSeries,

    #[error("reference value is zero")]
    ZeroReference,

    /// Parse failure in a data or model file, with location.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("unsupported model file version {found} (supported: {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
