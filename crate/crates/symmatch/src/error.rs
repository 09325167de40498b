use std::fmt;

/// Errors raised by the engine, grouped by the class a caller needs to
/// distinguish (file content vs. contract violation vs. I/O).
#[derive(Debug)]
pub enum Error {
    /// A file could not be read or written.
    Io {
        path: String,
        source: std::io::Error,
    },
    /// File content does not match its format. `line` is 1-based when the
    /// offending line is known.
    Parse {
        path: Option<String>,
        line: Option<usize>,
        message: String,
    },
    /// An operation's contract was violated (invalid argument, degenerate
    /// input, value out of range).
    Domain(String),
    /// A lookup failed (unknown defect id, unknown node).
    NotFound(String),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            path: None,
            line: None,
            message: message.into(),
        }
    }

    pub fn parse_at(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: None,
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Error::NotFound(message.into())
    }

    /// Attach a file path to a parse error produced without one.
    pub fn with_path(self, path: impl Into<String>) -> Self {
        match self {
            Error::Parse { line, message, .. } => Error::Parse {
                path: Some(path.into()),
                line,
                message,
            },
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io { path, source } => write!(f, "{path}: {source}"),
            Error::Parse {
                path,
                line,
                message,
            } => {
                if let Some(p) = path {
                    write!(f, "{p}: ")?;
                }
                if let Some(n) = line {
                    write!(f, "line {n}: ")?;
                }
                write!(f, "{message}")
            }
            Error::Domain(m) => write!(f, "{m}"),
            Error::NotFound(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
