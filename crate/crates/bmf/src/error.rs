use std::path::PathBuf;

/// Errors produced by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Shapes or mask lengths do not line up.
    #[error("dimension mismatch: {context} (expected {expected}, got {actual})")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// An index is outside the matrix.
    #[error("index out of range: {context} ({index} not below {bound})")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        bound: usize,
    },

    /// The input matrix has no ones; the greedy fiber choice is undefined.
    #[error("empty matrix: input has no ones")]
    EmptyMatrix,

    /// A parameter fails its precondition.
    #[error("invalid parameter: {0}")]
    Config(String),

    /// Coverage of an all-zeros matrix is undefined (division by nnz).
    #[error("coverage is undefined for a matrix with no ones")]
    UndefinedCoverage,

    /// A precondition on an operation argument was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// File or stream level failure.
    #[error("i/o error{}: {source}", path_suffix(.path))]
    Io {
        path: Option<PathBuf>,
        #[source]
        source: std::io::Error,
    },

    /// A line of an input file could not be parsed.
    #[error("parse error{} at line {line}: {message}", path_suffix(.path))]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },
}

fn path_suffix(path: &Option<PathBuf>) -> String {
    match path {
        Some(p) => format!(" in {}", p.display()),
        None => String::new(),
    }
}

impl From<std::io::Error> for Error {
    fn from(source: std::io::Error) -> Self {
        Error::Io { path: None, source }
    }
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: None,
            line,
            message: message.into(),
        }
    }

    /// Attach a file path to i/o and parse errors that lack one.
    pub fn with_path(self, path: impl Into<PathBuf>) -> Self {
        match self {
            Error::Io { path: None, source } => Error::Io {
                path: Some(path.into()),
                source,
            },
            Error::Parse {
                path: None,
                line,
                message,
            } => Error::Parse {
                path: Some(path.into()),
                line,
                message,
            },
            other => other,
        }
    }
}
