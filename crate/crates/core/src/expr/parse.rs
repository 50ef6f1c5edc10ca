use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use super::{Func, Node};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnknownIdentifier(String),
    Arity { func: &'static str, found: usize },
    InvalidNumber,
    ExpectedInteger,
    Expected(char),
    TrailingInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} at byte {offset}", describe(.kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::UnexpectedChar(c) => format!("unexpected character '{c}'"),
        ParseErrorKind::UnexpectedEnd => "unexpected end of input".into(),
        ParseErrorKind::UnknownIdentifier(s) => format!("unknown identifier '{s}'"),
        ParseErrorKind::Arity { func, found } => {
            format!("{func} takes exactly 1 argument, found {found}")
        }
        ParseErrorKind::InvalidNumber => "invalid number".into(),
        ParseErrorKind::ExpectedInteger => "expected an integer exponent".into(),
        ParseErrorKind::Expected(c) => format!("expected '{c}'"),
        ParseErrorKind::TrailingInput => "unexpected trailing input".into(),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub(super) fn parse(source: &str) -> Result<Node, ParseError> {
    let mut p = Parser {
        src: source.as_bytes(),
        pos: 0,
    };
    let node = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(ParseErrorKind::TrailingInput));
    }
    Ok(node)
}

impl<'a> Parser<'a> {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            offset: self.pos,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        match std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
        {
            Some(c) => self.error(ParseErrorKind::UnexpectedChar(c)),
            None if self.pos >= self.src.len() => self.error(ParseErrorKind::UnexpectedEnd),
            // offset in the middle of a multibyte char cannot happen: we only
            // advance over ASCII
            None => self.error(ParseErrorKind::UnexpectedChar('\u{FFFD}')),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            None => Err(self.error(ParseErrorKind::UnexpectedEnd)),
            Some(_) => Err(self.error(ParseErrorKind::Expected(c as char))),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Node::Add(Arc::new(lhs), Arc::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Node::Sub(Arc::new(lhs), Arc::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Node::Mul(Arc::new(lhs), Arc::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Node::Div(Arc::new(lhs), Arc::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.integer()?;
            return Ok(Node::Pow(Arc::new(base), n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits
            || matches!(self.src.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E'))
        {
            self.pos = start;
            return Err(self.error(ParseErrorKind::ExpectedInteger));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<i32>().map_err(|_| ParseError {
            kind: ParseErrorKind::ExpectedInteger,
            offset: start,
        })
    }

    fn number(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        let mut mantissa_digits = 0;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
            mantissa_digits += 1;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
                mantissa_digits += 1;
            }
        }
        if mantissa_digits == 0 {
            self.pos = start;
            return Err(self.error(ParseErrorKind::InvalidNumber));
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == exp_start {
                self.pos = save;
                return Err(self.error(ParseErrorKind::InvalidNumber));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: f64 = text.parse().map_err(|_| ParseError {
            kind: ParseErrorKind::InvalidNumber,
            offset: start,
        })?;
        if !value.is_finite() {
            return Err(ParseError {
                kind: ParseErrorKind::InvalidNumber,
                offset: start,
            });
        }
        Ok(Node::Const(Complex64::new(value, 0.0)))
    }

    fn base(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            None => Err(self.error(ParseErrorKind::UnexpectedEnd)),
            Some(b'-') => {
                self.pos += 1;
                let inner = self.base()?;
                Ok(Node::Neg(Arc::new(inner)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => self.number(),
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => self.identifier(),
            Some(_) => Err(self.unexpected()),
        }
    }

    fn identifier(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match name {
            "z" => return Ok(Node::Var),
            "i" => return Ok(Node::Const(Complex64::new(0.0, 1.0))),
            "pi" => return Ok(Node::Const(Complex64::new(PI, 0.0))),
            _ => {}
        }
        let Some(func) = Func::from_name(name) else {
            return Err(ParseError {
                kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
                offset: start,
            });
        };
        self.expect(b'(')?;
        if self.peek() == Some(b')') {
            return Err(ParseError {
                kind: ParseErrorKind::Arity {
                    func: func.name(),
                    found: 0,
                },
                offset: start,
            });
        }
        let arg = self.expr()?;
        let mut count = 1;
        while self.peek() == Some(b',') {
            self.pos += 1;
            self.expr()?;
            count += 1;
        }
        if count != 1 {
            return Err(ParseError {
                kind: ParseErrorKind::Arity {
                    func: func.name(),
                    found: count,
                },
                offset: start,
            });
        }
        self.expect(b')')?;
        Ok(Node::Call(func, Arc::new(arg)))
    }
}
