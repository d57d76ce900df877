use std::fmt;

use thiserror::Error;

/// A single problem found while parsing a text document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseIssue {
    /// 1-based line number; 0 when the issue concerns the whole document.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

fn join_issues(issues: &[ParseIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {}", join_issues(.0))]
    Parse(Vec<ParseIssue>),

    #[error("resource limit: {what} has {actual} vertices, limit is {limit}{hint}")]
    ResourceLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("precondition not met: {0}")]
    Precondition(String),

    /// A proved consequence failed on a concrete input. Either the input
    /// handling is broken or the underlying result is wrong.
    #[error("fatal inconsistency: {0}")]
    Inconsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse_at(line: usize, message: impl Into<String>) -> Self {
        Error::Parse(vec![ParseIssue {
            line,
            message: message.into(),
        }])
    }
}

pub type Result<T> = std::result::Result<T, Error>;
