//! File formats, reports and the command-line driver around `satfuzz-core`.
//!
//! Readers: ISCAS `.bench`, a BLIF subset, target files, pattern files and
//! DIMACS. Writers: the same plus CSV reports, DOT, a plain-text value dump
//! and a JSON run manifest. [`external::ExternalSolver`] plugs any
//! DIMACS-speaking solver binary into the core pipeline.

pub mod bench;
pub mod blif;
pub mod cli;
pub mod dimacs;
pub mod export;
pub mod external;
pub mod manifest;
pub mod patterns;
pub mod report;
pub mod targets;

use std::fmt;

/// A located problem in a text input. Lines and columns are 1-based; column 0
/// means the whole line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SourceError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SourceError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        SourceError { line, column, message: message.into() }
    }
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (0, _) => f.write_str(&self.message),
            (line, 0) => write!(f, "line {line}: {}", self.message),
            (line, column) => write!(f, "line {line}, column {column}: {}", self.message),
        }
    }
}

/// Strip a `#` comment.
pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}
