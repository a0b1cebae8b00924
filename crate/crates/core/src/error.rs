use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Location and cause of a failure to parse an expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken {
        found: String,
        expected: &'static str,
    },
    UnexpectedEnd {
        expected: &'static str,
    },
    UnknownIdentifier(String),
    IndexOutOfRange {
        name: String,
        max: usize,
    },
    NonIntegerExponent(String),
    InvalidNumber(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "unexpected {found}, expected {expected}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "unexpected end of input, expected {expected}")
            }
            ParseErrorKind::UnknownIdentifier(name) => write!(f, "unknown identifier {name}"),
            ParseErrorKind::IndexOutOfRange { name, max } => {
                write!(
                    f,
                    "variable {name} index out of range (valid indices 1..={max})"
                )
            }
            ParseErrorKind::NonIntegerExponent(s) => {
                write!(
                    f,
                    "exponent must be a non-negative integer literal, found {s}"
                )
            }
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number literal {s}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in {field}: {source}")]
    Parse {
        field: String,
        #[source]
        source: ParseError,
    },

    #[error("invalid field {field}: {reason}")]
    InvalidField { field: String, reason: String },

    #[error("domain error evaluating `{node}`: {reason}")]
    Domain { node: String, reason: &'static str },

    #[error("point too close to the zero section: |y| = {norm:e}")]
    ZeroSection { norm: f64 },

    #[error("point has {found} coordinates, expected {expected}")]
    PointDimension { expected: usize, found: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("degenerate fundamental tensor at {point}: det = {det:e}")]
    DegenerateMetric { point: String, det: f64 },

    #[error("inconsistent linear system in {context}: residual {residual:e}")]
    InconsistentSystem {
        context: &'static str,
        residual: f64,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, source: ParseError) -> Self {
        Error::Parse {
            field: field.into(),
            source,
        }
    }
}
