//! The textual specification language (`.texp` files).
//!
//! ```text
//! domain funcs;
//! main T;
//! T = eps \/ open : W;
//! W = write : W \/ close : eps;
//! type open matches func_post("fs.openSync", _, _, _);
//! ```
//!
//! Binary operators bind, from tightest to loosest: `:` (right
//! associative), `.`, `/\`, `\/`, `|`; the others associate to the left.
//! `var x. e` extends as far right as possible. `--` starts a comment.

pub mod ast;
pub mod format;
mod lexer;
mod lower;
mod parser;

use std::fmt;

use serde::Serialize;

pub use format::format_spec;
pub use parser::parse_expr;

use crate::program::SpecProgram;

/// 1-based, inclusive start and exclusive end position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl SourceSpan {
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        SourceSpan {
            start_line: self.start_line,
            start_col: self.start_col,
            end_line: other.end_line,
            end_col: other.end_col,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagnosticKind {
    Syntax,
    UnknownDomain,
    UnknownEquation,
    UnknownTypeName,
    DuplicateEquation,
    MissingMain,
    FreeVariable,
    UnguardedRecursion,
    BadClause,
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub span: SourceSpan,
    pub message: String,
}

impl Diagnostic {
    pub fn error(kind: DiagnosticKind, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            kind,
            span,
            message: message.into(),
        }
    }

    pub fn warning(kind: DiagnosticKind, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            kind,
            span,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {sev}: {}", self.span, self.message)
    }
}

/// Parses and checks a specification. On failure every diagnostic found is
/// returned, warnings included.
pub fn parse_spec(source: &str) -> Result<SpecProgram, Vec<Diagnostic>> {
    let ast = parser::parse_program(source)?;
    lower::lower(&ast)
}
