use std::fmt;

use degloci_core::Error as CoreError;

use crate::ast::Pos;

/// A located failure. Parse-phase kinds are `lexical`, `syntax`, `unbound`,
/// `arity` and `type`; evaluation failures carry the engine's error kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DslError {
    pub kind: &'static str,
    pub message: String,
    pub line: usize,
    pub col: usize,
}

impl DslError {
    pub fn new(kind: &'static str, pos: Pos, message: impl Into<String>) -> Self {
        DslError { kind, message: message.into(), line: pos.line, col: pos.col }
    }

    pub fn lexical(pos: Pos, message: impl Into<String>) -> Self {
        Self::new("lexical", pos, message)
    }

    pub fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        Self::new("syntax", pos, message)
    }

    pub fn engine(pos: Pos, err: CoreError) -> Self {
        Self::new(err.kind(), pos, err.message())
    }

    pub fn is_parse_error(&self) -> bool {
        matches!(self.kind, "lexical" | "syntax" | "unbound" | "arity" | "type")
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {} error: {}", self.line, self.col, self.kind, self.message)
    }
}

impl std::error::Error for DslError {}
