use std::fmt;

use crate::domain::TypeClause;
use crate::graph::BinOp;
use crate::term::{EventType, VarName};

use super::SourceSpan;

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Eps,
    Prefix(EventType, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Binder(VarName, Box<Expr>),
    Name(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
    /// Span of the event type of a prefix, used for diagnostics.
    pub head_span: Option<SourceSpan>,
}

/// Fully parenthesized rendering, used by golden tests of operator
/// precedence.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Eps => f.write_str("eps"),
            ExprKind::Name(n) => f.write_str(n),
            ExprKind::Prefix(ty, tail) => write!(f, "({ty} : {tail})"),
            ExprKind::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            ExprKind::Binder(x, body) => write!(f, "(var {x}. {body})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquationAst {
    pub name: String,
    pub name_span: SourceSpan,
    pub body: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClauseAst {
    pub clause: TypeClause,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramAst {
    pub domain: String,
    pub domain_span: SourceSpan,
    pub main: String,
    pub main_span: SourceSpan,
    pub equations: Vec<EquationAst>,
    pub clauses: Vec<ClauseAst>,
}
