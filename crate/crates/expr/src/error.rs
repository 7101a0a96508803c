use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
    #[error("`{0}` is a reserved function name")]
    ReservedName(String),
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
    #[error("unknown symbol `{0}`")]
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    UnknownIdentifier(String),
    UnknownFunction(String),
    NonIntegerExponent(String),
    ChainedPower,
    DivisionByZero,
    BadNumber(String),
}

/// A parse failure at a byte offset; `line` and `column` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, src: &str, offset: usize) -> Self {
        let offset = offset.min(src.len());
        let before = &src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        let message = match &kind {
            ParseErrorKind::UnexpectedChar(c) => format!("unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                format!("expected {expected}, found `{found}`")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                format!("expected {expected}, found end of input")
            }
            ParseErrorKind::UnknownIdentifier(name) => format!("unknown identifier `{name}`"),
            ParseErrorKind::UnknownFunction(name) => format!("unknown function `{name}`"),
            ParseErrorKind::NonIntegerExponent(e) => {
                format!("exponent must be an integer literal, found `{e}`")
            }
            ParseErrorKind::ChainedPower => "`^` is not associative; add parentheses".to_string(),
            ParseErrorKind::DivisionByZero => "division by zero".to_string(),
            ParseErrorKind::BadNumber(s) => format!("malformed number `{s}`"),
        };
        ParseError {
            kind,
            offset,
            line,
            column,
            message,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value for symbol `{0}`")]
    Unassigned(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative number")]
    NegativeSqrt,
    #[error("expression contains kernel `{0}`; exact evaluation needs a kernel-free expression")]
    NotRational(String),
    #[error("numeric overflow or invalid operation in high-precision evaluation")]
    NonFinite,
}
