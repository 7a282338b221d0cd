//! Tokenizer and expression parser shared by the presentation, element and
//! smooth-map grammars. Every error carries a 1-based line and column.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use crate::poly::Polynomial;
use crate::rational::{parse_rational, Rational};

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} (line {}, column {})", .pos.line, .pos.column)]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("undeclared variable '{0}'")]
    UndeclaredVariable(String),
    #[error("duplicate variable '{0}'")]
    DuplicateVariable(String),
    #[error("relation has nonzero constant term {0}")]
    NonzeroConstant(String),
    #[error("invalid number '{0}'")]
    InvalidNumber(String),
    #[error("{0}")]
    Invalid(String),
}

impl ParseError {
    pub fn new(pos: Pos, kind: ParseErrorKind) -> Self {
        ParseError { pos, kind }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Token {
    Ident(String),
    Number(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Pipe,
    Semicolon,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("identifier '{s}'"),
            Token::Number(s) => format!("number '{s}'"),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Slash => "'/'".into(),
            Token::Caret => "'^'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Comma => "','".into(),
            Token::Pipe => "'|'".into(),
            Token::Semicolon => "';'".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(Token, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let token = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Token::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // scientific suffix only when digits follow: `2e-3`, not `2e`
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            Token::Number(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Token::Plus,
                '-' => Token::Minus,
                '*' => Token::Star,
                '/' => Token::Slash,
                '^' => Token::Caret,
                '(' => Token::LParen,
                ')' => Token::RParen,
                ',' => Token::Comma,
                '|' => Token::Pipe,
                ';' => Token::Semicolon,
                other => return Err(ParseError::new(pos, ParseErrorKind::UnexpectedChar(other))),
            }
        };
        column += i - start;
        out.push((token, pos));
    }
    out.push((Token::Eof, Pos { line, column }));
    Ok(out)
}

/// Untyped syntax tree; identifiers are resolved by the consumer.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Ast {
    Num(Rational, Pos),
    Ident(String, Pos),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, Pos),
    Pow(Box<Ast>, Box<Ast>, Pos),
    Call(String, Vec<Ast>, Pos),
}

impl Ast {
    pub(crate) fn pos(&self) -> Pos {
        match self {
            Ast::Num(_, p) | Ast::Ident(_, p) | Ast::Div(_, _, p) | Ast::Pow(_, _, p) | Ast::Call(_, _, p) => *p,
            Ast::Neg(a) | Ast::Add(a, _) | Ast::Sub(a, _) | Ast::Mul(a, _) => a.pos(),
        }
    }

    /// Value of a closed arithmetic expression (no identifiers or calls).
    pub(crate) fn constant_value(&self) -> Option<Rational> {
        Some(match self {
            Ast::Num(q, _) => q.clone(),
            Ast::Neg(a) => -a.constant_value()?,
            Ast::Add(a, b) => a.constant_value()? + b.constant_value()?,
            Ast::Sub(a, b) => a.constant_value()? - b.constant_value()?,
            Ast::Mul(a, b) => a.constant_value()? * b.constant_value()?,
            Ast::Div(a, b, _) => {
                let d = b.constant_value()?;
                if d.is_zero() {
                    return None;
                }
                a.constant_value()? / d
            }
            Ast::Pow(a, b, _) => {
                let e = b.constant_value()?;
                if !e.is_integer() {
                    return None;
                }
                let e = e.to_integer().to_i32()?;
                let base = a.constant_value()?;
                if e < 0 && base.is_zero() {
                    return None;
                }
                num_traits::pow::Pow::pow(base, e)
            }
            Ast::Ident(..) | Ast::Call(..) => return None,
        })
    }
}

pub(crate) struct Parser {
    tokens: Vec<(Token, Pos)>,
    at: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { tokens: tokenize(text)?, at: 0 })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    pub(crate) fn pos(&self) -> Pos {
        self.tokens[self.at].1
    }

    pub(crate) fn next(&mut self) -> (Token, Pos) {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == token {
            self.next();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, token: &Token) -> Result<Pos, ParseError> {
        if self.peek() == token {
            Ok(self.next().1)
        } else {
            Err(self.unexpected(&token.describe()))
        }
    }

    pub(crate) fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::new(
            self.pos(),
            ParseErrorKind::Unexpected { expected: expected.to_string(), found: self.peek().describe() },
        )
    }

    pub(crate) fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Token::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Token::Plus) {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Token::Minus) {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Token::Star) {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if *self.peek() == Token::Slash {
                let pos = self.next().1;
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.eat(&Token::Minus) {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat(&Token::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Token::Caret {
            let pos = self.next().1;
            let exponent = self.unary()?;
            return Ok(Ast::Pow(Box::new(base), Box::new(exponent), pos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let (token, pos) = self.tokens[self.at].clone();
        match token {
            Token::Number(text) => {
                self.next();
                let q = parse_rational(&text)
                    .ok_or_else(|| ParseError::new(pos, ParseErrorKind::InvalidNumber(text.clone())))?;
                Ok(Ast::Num(q, pos))
            }
            Token::Ident(name) => {
                self.next();
                if self.eat(&Token::LParen) {
                    let mut args = Vec::new();
                    if *self.peek() != Token::RParen {
                        args.push(self.expr()?);
                        while self.eat(&Token::Comma) {
                            args.push(self.expr()?);
                        }
                    }
                    self.expect(&Token::RParen)?;
                    Ok(Ast::Call(name, args, pos))
                } else {
                    Ok(Ast::Ident(name, pos))
                }
            }
            Token::LParen => {
                self.next();
                let inner = self.expr()?;
                self.expect(&Token::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, identifier or '('")),
        }
    }
}

/// Lowers a syntax tree to a polynomial over the declared variable names.
pub(crate) fn ast_to_polynomial(ast: &Ast, names: &[String]) -> Result<Polynomial, ParseError> {
    let n = names.len();
    Ok(match ast {
        Ast::Num(q, _) => Polynomial::constant(n, q.clone()),
        Ast::Ident(name, pos) => match names.iter().position(|v| v == name) {
            Some(i) => Polynomial::var(n, i),
            None => return Err(ParseError::new(*pos, ParseErrorKind::UndeclaredVariable(name.clone()))),
        },
        Ast::Neg(a) => ast_to_polynomial(a, names)?.neg(),
        Ast::Add(a, b) => ast_to_polynomial(a, names)?.add(&ast_to_polynomial(b, names)?),
        Ast::Sub(a, b) => ast_to_polynomial(a, names)?.sub(&ast_to_polynomial(b, names)?),
        Ast::Mul(a, b) => ast_to_polynomial(a, names)?.mul(&ast_to_polynomial(b, names)?),
        Ast::Div(a, b, pos) => {
            let divisor = b.constant_value().filter(|d| !d.is_zero()).ok_or_else(|| {
                ParseError::new(*pos, ParseErrorKind::Invalid("division only by a nonzero constant".into()))
            })?;
            ast_to_polynomial(a, names)?.scale(&divisor.recip())
        }
        Ast::Pow(a, b, pos) => {
            let e = b.constant_value().filter(|e| e.is_integer()).and_then(|e| e.to_integer().to_u32()).ok_or_else(
                || ParseError::new(*pos, ParseErrorKind::Invalid("exponent must be a non-negative integer".into())),
            )?;
            ast_to_polynomial(a, names)?.pow(e)
        }
        Ast::Call(name, _, pos) => {
            return Err(ParseError::new(
                *pos,
                ParseErrorKind::Invalid(format!("function '{name}' is not allowed in a polynomial")),
            ))
        }
    })
}

/// Parses a single polynomial over `names`.
pub fn parse_polynomial(text: &str, names: &[String]) -> Result<Polynomial, ParseError> {
    let mut p = Parser::new(text)?;
    let ast = p.expr()?;
    p.expect_eof()?;
    ast_to_polynomial(&ast, names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_rational_literals_and_powers() {
        let p = parse_polynomial("1/2*x^2 - (x + y)^2", &names(&["x", "y"])).unwrap();
        assert_eq!(p.display(&names(&["x", "y"])), "-1/2*x^2 - 2*x*y - y^2");
        let q = parse_polynomial("3/4", &names(&[])).unwrap();
        assert_eq!(q.constant_term(), frac(3, 4));
    }

    #[test]
    fn reports_positions() {
        let err = parse_polynomial("x +\n  z", &names(&["x"])).unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, column: 3 });
        assert_eq!(err.kind, ParseErrorKind::UndeclaredVariable("z".into()));

        let err = parse_polynomial("x + $", &names(&["x"])).unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, column: 5 });

        let err = parse_polynomial("x^y", &names(&["x", "y"])).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Invalid(_)));
    }
}
