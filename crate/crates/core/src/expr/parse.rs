//! Recursive-descent parser for the nonlinearity language.
//!
//! ```text
//! expr   := term { ("+"|"-") term } ;
//! term   := factor { ("*"|"/") factor } ;
//! factor := ["-"] base [ "^" integer ] ;
//! base   := number | "x" | "k" | ident "(" expr ")" | "(" expr ")" ;
//! ident  := "sin" | "cos" | "exp" | "tanh" | "abs" ;
//! ```
//!
//! Divisors must not depend on x; a divisor that is a literal constant must
//! be nonzero.

use thiserror::Error;

use super::{Expr, Func};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("exponent `{text}` at byte {offset} is not a non-negative integer literal")]
    NonIntegerExponent { offset: usize, text: String },
    #[error("divisor starting at byte {offset} depends on x")]
    XDependentDivisor { offset: usize },
    #[error("divisor starting at byte {offset} is identically zero")]
    ZeroDivisor { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::NonIntegerExponent { offset, .. }
            | ParseError::XDependentDivisor { offset }
            | ParseError::ZeroDivisor { offset } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Num(f64, &'a str),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(tok: &Tok<'_>) -> String {
    match tok {
        Tok::Num(_, s) => format!("number `{s}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok<'_>)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let end = scan_number(bytes, i);
                let raw = &text[i..end];
                let value: f64 = raw.parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    message: format!("malformed number `{raw}`"),
                })?;
                if !value.is_finite() {
                    return Err(ParseError::Syntax {
                        offset: start,
                        message: format!("number `{raw}` is out of range"),
                    });
                }
                i = end;
                out.push((start, Tok::Num(value, raw)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = i;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                out.push((start, Tok::Ident(&text[i..end])));
                i = end;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

// digits ["." digits] [("e"|"E") ["+"|"-"] digits]
fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    i = digits(i);
    if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
        i = digits(i + 1);
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            i = digits(j);
        }
    }
    i
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok<'a> {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok<'a>) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message: format!("expected {expected}, found {}", describe(self.peek())),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    let offset = self.offset();
                    let divisor = self.factor()?;
                    if divisor.contains_x() {
                        return Err(ParseError::XDependentDivisor { offset });
                    }
                    if !divisor.contains_k() && divisor.eval_raw(0.0, 0.0) == 0.0 {
                        return Err(ParseError::ZeroDivisor { offset });
                    }
                    lhs = Expr::Div(Box::new(lhs), Box::new(divisor));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut e = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let offset = self.offset();
            let exponent = match self.peek().clone() {
                Tok::Num(_, raw) => {
                    self.bump();
                    if !raw.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(ParseError::NonIntegerExponent { offset, text: raw.to_string() });
                    }
                    raw.parse::<u32>().map_err(|_| ParseError::NonIntegerExponent {
                        offset,
                        text: raw.to_string(),
                    })?
                }
                Tok::Minus => {
                    return Err(ParseError::NonIntegerExponent { offset, text: "-".into() });
                }
                _ => return Err(self.unexpected("an integer exponent")),
            };
            e = Expr::Pow(Box::new(e), exponent);
        }
        Ok(if negate { Expr::Neg(Box::new(e)) } else { e })
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let (offset, tok) = self.bump();
        match tok {
            Tok::Num(v, _) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident("x") => Ok(Expr::X),
            Tok::Ident("k") => Ok(Expr::K),
            Tok::Ident(name) => {
                let func = Func::from_input_name(name).ok_or_else(|| ParseError::UnknownIdentifier {
                    offset,
                    name: name.to_string(),
                })?;
                if *self.peek() != Tok::LParen {
                    return Err(self.unexpected("`(` after function name"));
                }
                self.bump();
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            _ => Err(ParseError::Syntax {
                    offset,
                message: format!("expected a number, variable, function or `(`, found {}", describe(&tok)),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected("`)`"))
        }
    }
}

pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser { toks: lex(text)?, pos: 0 };
    let e = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok(e)
}
