use thiserror::Error;

use super::{NodeId, Span};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AstError {
    #[error("syntax error at {line}:{column} (bytes {}..{}): {message}", span.start, span.end)]
    SyntaxError {
        span: Span,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("no grammar adapter registered for `{0}`")]
    UnknownGrammar(String),
    #[error("node {} is not a statement", .0 .0)]
    NotAStatement(NodeId),
    #[error("grammar mapping `{grammar}` has no entry for concrete kind `{kind}`")]
    UnmappedKind { grammar: String, kind: String },
    #[error("invalid grammar mapping: {0}")]
    InvalidMapping(String),
}

impl AstError {
    pub(crate) fn syntax(source: &str, span: Span, message: impl Into<String>) -> Self {
        let prefix = &source[..span.start.min(source.len())];
        let line = prefix.matches('\n').count() + 1;
        let column = prefix.rfind('\n').map_or(prefix.len(), |i| prefix.len() - i - 1) + 1;
        AstError::SyntaxError { span, line, column, message: message.into() }
    }
}
