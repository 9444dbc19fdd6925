use crate::domain::{Guard, GuardOp, Operand, TypeClause};
use crate::graph::BinOp;
use crate::term::{EventType, Pattern, VarName};
use crate::value::Value;

use super::ast::{ClauseAst, EquationAst, Expr, ExprKind, ProgramAst};
use super::lexer::{tokenize, Tok, Token};
use super::{Diagnostic, DiagnosticKind, SourceSpan};

const KEYWORDS: &[&str] = &[
    "domain", "main", "type", "matches", "where", "var", "eps", "true", "false", "null",
];

/// Binary operator levels, loosest first.
const LEVELS: [(Tok, BinOp); 4] = [
    (Tok::Pipe, BinOp::Shuffle),
    (Tok::OrOp, BinOp::Or),
    (Tok::AndOp, BinOp::And),
    (Tok::Dot, BinOp::Cat),
];

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek() == tok
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(Diagnostic::error(DiagnosticKind::Syntax, self.span(), message))
    }

    fn expect(&mut self, tok: Tok) -> PResult<SourceSpan> {
        if self.at(&tok) {
            Ok(self.bump().span)
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.at_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`, found {}", self.peek()))
        }
    }

    /// An identifier that is not a keyword.
    fn name(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && s != "_" => {
                let span = self.bump().span;
                Ok((s, span))
            }
            other => self.error(format!("expected {what}, found {other}")),
        }
    }

    /// Skips past the next `;` (or to end of input).
    fn sync(&mut self) {
        while !matches!(self.peek(), Tok::Semi | Tok::Eof) {
            self.bump();
        }
        if self.at(&Tok::Semi) {
            self.bump();
        }
    }

    fn header_item(&mut self, kw: &str, errors: &mut Vec<Diagnostic>) -> (String, SourceSpan) {
        let start = self.span();
        let result = (|| {
            self.expect_keyword(kw)?;
            let name = self.name(&format!("{kw} name"))?;
            self.expect(Tok::Semi)?;
            Ok(name)
        })();
        result.unwrap_or_else(|e| {
            errors.push(e);
            self.sync();
            (String::new(), start)
        })
    }

    fn program(&mut self) -> Result<ProgramAst, Vec<Diagnostic>> {
        let mut errors = Vec::new();
        let (domain, domain_span) = self.header_item("domain", &mut errors);
        let (main, main_span) = self.header_item("main", &mut errors);
        let mut equations = Vec::new();
        let mut clauses = Vec::new();
        while !self.at(&Tok::Eof) {
            let item = if self.at_keyword("type") {
                self.clause().map(|c| clauses.push(c))
            } else {
                self.equation().map(|e| equations.push(e))
            };
            if let Err(e) = item {
                errors.push(e);
                self.sync();
            }
        }
        if errors.is_empty() {
            Ok(ProgramAst {
                domain,
                domain_span,
                main,
                main_span,
                equations,
                clauses,
            })
        } else {
            Err(errors)
        }
    }

    fn equation(&mut self) -> PResult<EquationAst> {
        let (name, name_span) = self.name("equation name or `type`")?;
        self.expect(Tok::Assign)?;
        let body = self.expr()?;
        self.expect(Tok::Semi)?;
        Ok(EquationAst {
            name,
            name_span,
            body,
        })
    }

    fn clause(&mut self) -> PResult<ClauseAst> {
        let start = self.span();
        self.expect_keyword("type")?;
        let (head, _) = self.type_head()?;
        self.expect_keyword("matches")?;
        let (body, _) = self.type_head()?;
        let mut guards = Vec::new();
        if self.at_keyword("where") {
            self.bump();
            guards.push(self.guard()?);
            while self.at(&Tok::Comma) {
                self.bump();
                guards.push(self.guard()?);
            }
        }
        let end = self.expect(Tok::Semi)?;
        Ok(ClauseAst {
            clause: TypeClause { head, body, guards },
            span: start.to(end),
        })
    }

    fn guard(&mut self) -> PResult<Guard> {
        let lhs = self.operand()?;
        let op = match self.peek() {
            Tok::EqEq => GuardOp::Eq,
            Tok::NotEq => GuardOp::Ne,
            Tok::Gt => GuardOp::Gt,
            Tok::Ge => GuardOp::Ge,
            Tok::Lt => GuardOp::Lt,
            Tok::Le => GuardOp::Le,
            other => return self.error(format!("expected a comparison operator, found {other}")),
        };
        self.bump();
        let rhs = self.operand()?;
        Ok(Guard { op, lhs, rhs })
    }

    fn operand(&mut self) -> PResult<Operand> {
        if let Some(v) = self.scalar() {
            return Ok(Operand::Lit(v));
        }
        let (name, _) = self.name("variable or literal")?;
        Ok(Operand::Var(VarName::new(name)))
    }

    /// Consumes a JSON scalar literal if one is next.
    fn scalar(&mut self) -> Option<Value> {
        let v = match self.peek() {
            Tok::Str(s) => Value::Text(s.clone()),
            Tok::Num(n) => Value::Number(*n),
            Tok::Ident(s) if s == "true" => Value::Bool(true),
            Tok::Ident(s) if s == "false" => Value::Bool(false),
            Tok::Ident(s) if s == "null" => Value::Null,
            _ => return None,
        };
        self.bump();
        Some(v)
    }

    fn type_head(&mut self) -> PResult<(EventType, SourceSpan)> {
        let (head, start) = self.name("event type name")?;
        let mut args = Vec::new();
        if self.at(&Tok::LParen) {
            self.bump();
            args = self.pattern_list(Tok::RParen)?;
            self.expect(Tok::RParen)?;
        }
        Ok((EventType::new(head, args), start.to(self.prev_span())))
    }

    fn pattern_list(&mut self, close: Tok) -> PResult<Vec<Pattern>> {
        let mut out = Vec::new();
        if self.at(&close) {
            return Ok(out);
        }
        out.push(self.pattern()?);
        while self.at(&Tok::Comma) {
            self.bump();
            out.push(self.pattern()?);
        }
        Ok(out)
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        if let Some(v) = self.scalar() {
            return Ok(Pattern::Literal(v));
        }
        match self.peek().clone() {
            Tok::Ident(s) if s == "_" => {
                self.bump();
                Ok(Pattern::Wildcard)
            }
            Tok::LBrack => {
                self.bump();
                let items = self.pattern_list(Tok::RBrack)?;
                let tail = if self.at(&Tok::Pipe) && !items.is_empty() {
                    self.bump();
                    Some(Box::new(self.pattern()?))
                } else {
                    None
                };
                self.expect(Tok::RBrack)?;
                Ok(Pattern::Seq { items, tail })
            }
            Tok::Ident(_) if self.peek_at(1) == &Tok::LParen => {
                let (name, _) = self.name("constructor name")?;
                self.bump();
                let args = self.pattern_list(Tok::RParen)?;
                self.expect(Tok::RParen)?;
                Ok(Pattern::Constructor { name, args })
            }
            _ => {
                let (name, _) = self.name("pattern")?;
                Ok(Pattern::Var(VarName::new(name)))
            }
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(0)
    }

    fn binary(&mut self, level: usize) -> PResult<Expr> {
        let Some((tok, op)) = LEVELS.get(level).cloned() else {
            return self.prefix();
        };
        let mut lhs = self.binary(level + 1)?;
        while self.at(&tok) {
            self.bump();
            let rhs = self.binary(level + 1)?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                span,
                head_span: None,
            };
        }
        Ok(lhs)
    }

    fn starts_type_head(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && s != "_")
            && matches!(self.peek_at(1), Tok::LParen | Tok::Colon)
    }

    fn prefix(&mut self) -> PResult<Expr> {
        if !self.starts_type_head() {
            return self.primary();
        }
        let (ty, head_span) = self.type_head()?;
        self.expect(Tok::Colon)?;
        let tail = self.prefix()?;
        Ok(Expr {
            span: head_span.to(tail.span),
            kind: ExprKind::Prefix(ty, Box::new(tail)),
            head_span: Some(head_span),
        })
    }

    fn primary(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Ident(s) if s == "eps" => {
                self.bump();
                Ok(Expr {
                    kind: ExprKind::Eps,
                    span: start,
                    head_span: None,
                })
            }
            Tok::Ident(s) if s == "var" => {
                self.bump();
                let (x, _) = self.name("variable")?;
                self.expect(Tok::Dot)?;
                let body = self.expr()?;
                Ok(Expr {
                    span: start.to(body.span),
                    kind: ExprKind::Binder(VarName::new(x), Box::new(body)),
                    head_span: None,
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                let end = self.expect(Tok::RParen)?;
                Ok(Expr {
                    span: start.to(end),
                    ..inner
                })
            }
            Tok::Ident(_) => {
                let (name, span) = self.name("expression")?;
                Ok(Expr {
                    kind: ExprKind::Name(name),
                    span,
                    head_span: None,
                })
            }
            other => self.error(format!("expected an expression, found {other}")),
        }
    }
}

fn parser(source: &str) -> Result<Parser, Vec<Diagnostic>> {
    let toks = tokenize(source).map_err(|e| vec![e])?;
    Ok(Parser { toks, pos: 0 })
}

pub(crate) fn parse_program(source: &str) -> Result<ProgramAst, Vec<Diagnostic>> {
    parser(source)?.program()
}

/// Parses a single trace expression without resolving names.
pub fn parse_expr(source: &str) -> Result<Expr, Vec<Diagnostic>> {
    let mut p = parser(source)?;
    let e = p.expr().map_err(|e| vec![e])?;
    if !p.at(&Tok::Eof) {
        return Err(vec![Diagnostic::error(
            DiagnosticKind::Syntax,
            p.span(),
            format!("unexpected {} after expression", p.peek()),
        )]);
    }
    Ok(e)
}
