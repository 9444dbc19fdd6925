use std::fmt;

use super::{Diagnostic, DiagnosticKind, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Num(f64),
    Colon,
    Dot,
    Semi,
    Comma,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Pipe,
    AndOp,
    OrOp,
    Assign,
    EqEq,
    NotEq,
    Gt,
    Ge,
    Lt,
    Le,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Str(s) => return write!(f, "string {s:?}"),
            Tok::Num(n) => return write!(f, "number {n}"),
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Pipe => "|",
            Tok::AndOp => "/\\",
            Tok::OrOp => "\\/",
            Tok::Assign => "=",
            Tok::EqEq => "==",
            Tok::NotEq => "!=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('-') if self.peek2() == Some('-') => {
                    while !matches!(self.peek(), None | Some('\n')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn span_from(&self, line: usize, col: usize) -> SourceSpan {
        SourceSpan {
            start_line: line,
            start_col: col,
            end_line: self.line,
            end_col: self.col,
        }
    }

    fn next_token(&mut self) -> Result<Token, Diagnostic> {
        self.skip_trivia();
        let (line, col, start) = (self.line, self.col, self.pos);
        let Some(c) = self.bump() else {
            return Ok(Token {
                tok: Tok::Eof,
                span: self.span_from(line, col),
            });
        };
        let tok = match c {
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '|' => Tok::Pipe,
            '/' if self.peek() == Some('\\') => {
                self.bump();
                Tok::AndOp
            }
            '\\' if self.peek() == Some('/') => {
                self.bump();
                Tok::OrOp
            }
            '=' if self.peek() == Some('=') => {
                self.bump();
                Tok::EqEq
            }
            '=' => Tok::Assign,
            '!' if self.peek() == Some('=') => {
                self.bump();
                Tok::NotEq
            }
            '>' if self.peek() == Some('=') => {
                self.bump();
                Tok::Ge
            }
            '>' => Tok::Gt,
            '<' if self.peek() == Some('=') => {
                self.bump();
                Tok::Le
            }
            '<' => Tok::Lt,
            '"' => self.string(line, col, start)?,
            c if c.is_ascii_digit() || (c == '-' && self.peek().is_some_and(|d| d.is_ascii_digit())) => {
                self.number(line, col, start)?
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.bump();
                }
                Tok::Ident(self.src[start..self.pos].to_owned())
            }
            other => {
                return Err(Diagnostic::error(
                    DiagnosticKind::Syntax,
                    self.span_from(line, col),
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        Ok(Token {
            tok,
            span: self.span_from(line, col),
        })
    }

    fn string(&mut self, line: usize, col: usize, start: usize) -> Result<Tok, Diagnostic> {
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => {
                    self.bump();
                }
                Some('\n') | None => {
                    return Err(Diagnostic::error(
                        DiagnosticKind::Syntax,
                        self.span_from(line, col),
                        "unterminated string literal",
                    ))
                }
                Some(_) => {}
            }
        }
        serde_json::from_str::<String>(&self.src[start..self.pos])
            .map(Tok::Str)
            .map_err(|e| {
                Diagnostic::error(
                    DiagnosticKind::Syntax,
                    self.span_from(line, col),
                    format!("invalid string literal: {e}"),
                )
            })
    }

    fn number(&mut self, line: usize, col: usize, start: usize) -> Result<Tok, Diagnostic> {
        let digits = |lx: &mut Self| {
            while lx.peek().is_some_and(|c| c.is_ascii_digit()) {
                lx.bump();
            }
        };
        digits(self);
        // A fraction needs a digit after the dot; otherwise the dot is an
        // operator.
        if self.peek() == Some('.') && self.peek2().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            digits(self);
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = (self.pos, self.line, self.col);
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                digits(self);
            } else {
                (self.pos, self.line, self.col) = save;
            }
        }
        self.src[start..self.pos]
            .parse::<f64>()
            .map(Tok::Num)
            .map_err(|e| {
                Diagnostic::error(
                    DiagnosticKind::Syntax,
                    self.span_from(line, col),
                    format!("invalid number: {e}"),
                )
            })
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut lx = Lexer {
        src,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        let t = lx.next_token()?;
        let done = t.tok == Tok::Eof;
        out.push(t);
        if done {
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_comments() {
        assert_eq!(
            toks("a /\\ b \\/ c -- trailing\n| d"),
            [
                Tok::Ident("a".into()),
                Tok::AndOp,
                Tok::Ident("b".into()),
                Tok::OrOp,
                Tok::Ident("c".into()),
                Tok::Pipe,
                Tok::Ident("d".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn numbers_do_not_eat_operator_dots() {
        assert_eq!(toks("1.5"), [Tok::Num(1.5), Tok::Eof]);
        assert_eq!(toks("-3"), [Tok::Num(-3.0), Tok::Eof]);
        assert_eq!(toks("X.e"), [Tok::Ident("X".into()), Tok::Dot, Tok::Ident("e".into()), Tok::Eof]);
        assert_eq!(toks("2.x"), [Tok::Num(2.0), Tok::Dot, Tok::Ident("x".into()), Tok::Eof]);
        assert_eq!(toks("1e3"), [Tok::Num(1000.0), Tok::Eof]);
    }

    #[test]
    fn strings_use_json_escapes() {
        assert_eq!(toks(r#""a\"b\n""#), [Tok::Str("a\"b\n".into()), Tok::Eof]);
        assert!(tokenize("\"open").is_err());
    }

    #[test]
    fn spans_are_one_based() {
        let t = tokenize("ab\n  cd").unwrap();
        assert_eq!(
            t[1].span,
            SourceSpan { start_line: 2, start_col: 3, end_line: 2, end_col: 5 }
        );
    }
}
