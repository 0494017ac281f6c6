use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Bad letter, bad index or otherwise unparsable input.
    Malformed(String),
    /// Operands live in different groups (or different ranks).
    GroupMismatch(String),
    /// Identity passed where a nontrivial element is required.
    Degenerate(String),
    /// DSL syntax error at a byte offset.
    Syntax { pos: usize, msg: String },
    /// Composed map families do not agree on source/target groups.
    Type(String),
    /// Radii or other parameters violate an operation's precondition.
    Config(String),
    /// Integer arithmetic left the `i64` range.
    Overflow,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Malformed(m) => write!(f, "malformed input: {m}"),
            Error::GroupMismatch(m) => write!(f, "group mismatch: {m}"),
            Error::Degenerate(m) => write!(f, "degenerate input: {m}"),
            Error::Syntax { pos, msg } => write!(f, "syntax error at {pos}: {msg}"),
            Error::Type(m) => write!(f, "type error: {m}"),
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::Overflow => f.write_str("integer overflow"),
        }
    }
}

impl core::error::Error for Error {}
