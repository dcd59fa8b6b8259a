//! The `.meros` model language.
//!
//! ```text
//! system "Rico" {
//!   node "Move To" {
//!     uses_action "/move_base" : "move_base_msgs/MoveBaseAction";
//!   }
//! }
//! ```
//!
//! [`serialize_model`] writes the canonical form: declarations sorted within
//! each block, two-space indentation, one declaration per line.

mod lexer;
mod parser;
mod serializer;

use std::fmt;

pub use crate::severity::Severity;
pub use parser::parse_model;
pub use serializer::serialize_model;

/// Position of a diagnostic in the source. Line and column are 1-based and
/// counted in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        SourceSpan { line, column, length }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub span: SourceSpan,
    pub message: String,
    pub severity: Severity,
}

impl ParseDiagnostic {
    pub(crate) fn error(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            span,
            message: message.into(),
            severity: Severity::Error,
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.span.line, self.span.column, self.severity, self.message
        )
    }
}

/// Parses raw bytes, reporting invalid UTF-8 as a diagnostic.
pub fn parse_model_bytes(bytes: &[u8]) -> Result<crate::model::RosSystem, Vec<ParseDiagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_model(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            // valid prefix is UTF-8 by construction
            let prefix = std::str::from_utf8(valid).unwrap_or_default();
            let line = prefix.matches('\n').count() + 1;
            let column = prefix.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(vec![ParseDiagnostic::error(
                SourceSpan::new(line, column, 1),
                "input is not valid UTF-8",
            )])
        }
    }
}

/// Renders `s` as a quoted string literal of the model language.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => out.push_str(&format!("\\u{{{:x}}}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
