//! Recursive-descent parser for the scalar expression grammar.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" integer)?
//! atom   := number | ident | ident "(" expr ")" | "(" expr ")"
//! ident  := [A-Za-z][A-Za-z0-9_]*
//! number := digits ("." digits)?
//! ```
//!
//! Identifiers must be chart coordinates; `exp`, `sin`, `cos` are the only
//! function names. Decimal literals are read as exact rationals.

use std::fmt;

use num::rational::Ratio;
use num::One;

use crate::scalar::{Rat, Scalar};

#[derive(Debug, Clone)]
pub struct ParseError {
    pub offset: usize,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at line {}, column {}", self.message, self.line, self.col)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

fn line_col(src: &str, offset: usize) -> (u32, u32) {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in src.char_indices() {
        if i >= offset {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

impl<'a> Lexer<'a> {
    fn error(&self, offset: usize, message: String) -> ParseError {
        let (line, col) = line_col(self.src, offset);
        ParseError {
            offset,
            line,
            col,
            message,
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.bytes.len() {
            let start = self.pos;
            let c = self.bytes[self.pos] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => {
                    self.pos += 1;
                }
                '+' => {
                    self.pos += 1;
                    out.push((Tok::Plus, start));
                }
                '-' => {
                    self.pos += 1;
                    out.push((Tok::Minus, start));
                }
                '*' => {
                    self.pos += 1;
                    out.push((Tok::Star, start));
                }
                '/' => {
                    self.pos += 1;
                    out.push((Tok::Slash, start));
                }
                '^' => {
                    self.pos += 1;
                    out.push((Tok::Caret, start));
                }
                '(' => {
                    self.pos += 1;
                    out.push((Tok::LParen, start));
                }
                ')' => {
                    self.pos += 1;
                    out.push((Tok::RParen, start));
                }
                '0'..='9' | '.' => {
                    let mut end = self.pos;
                    let mut seen_dot = false;
                    while end < self.bytes.len() {
                        let d = self.bytes[end] as char;
                        if d.is_ascii_digit() {
                            end += 1;
                        } else if d == '.' && !seen_dot {
                            seen_dot = true;
                            end += 1;
                        } else {
                            break;
                        }
                    }
                    let text = &self.src[self.pos..end];
                    let rat = parse_decimal(text)
                        .ok_or_else(|| self.error(start, format!("bad number `{}`", text)))?;
                    self.pos = end;
                    out.push((Tok::Num(rat), start));
                }
                c if c.is_ascii_alphabetic() => {
                    let mut end = self.pos;
                    while end < self.bytes.len() {
                        let d = self.bytes[end] as char;
                        if d.is_ascii_alphanumeric() || d == '_' {
                            end += 1;
                        } else {
                            break;
                        }
                    }
                    out.push((Tok::Ident(self.src[self.pos..end].to_string()), start));
                    self.pos = end;
                }
                other => {
                    return Err(self.error(start, format!("unexpected character `{}`", other)));
                }
            }
        }
        Ok(out)
    }
}

fn parse_decimal(text: &str) -> Option<Rat> {
    if text == "." {
        return None;
    }
    match text.split_once('.') {
        None => {
            let n: i128 = text.parse().ok()?;
            Some(Rat::from_integer(n))
        }
        Some((int, frac)) => {
            let int_part: i128 = if int.is_empty() { 0 } else { int.parse().ok()? };
            if frac.is_empty() {
                return Some(Rat::from_integer(int_part));
            }
            let frac_digits: i128 = frac.parse().ok()?;
            let denom = 10i128.checked_pow(frac.len() as u32)?;
            Some(Rat::from_integer(int_part) + Ratio::new(frac_digits, denom))
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn error_at(&self, offset: usize, message: String) -> ParseError {
        let (line, col) = line_col(self.src, offset);
        ParseError {
            offset,
            line,
            col,
            message,
        }
    }

    fn error_here(&self, message: String) -> ParseError {
        let offset = self
            .toks
            .get(self.pos)
            .map(|t| t.1)
            .unwrap_or(self.src.len());
        self.error_at(offset, message)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(format!("expected {}", what)))
        }
    }

    fn expr(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.div(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let negative = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.bump() {
                Some(Tok::Num(r)) if r.denom().is_one() => {
                    let mut n = *r.numer();
                    if negative {
                        n = -n;
                    }
                    if n < i32::MIN as i128 || n > i32::MAX as i128 {
                        return Err(self.error_here("exponent out of range".into()));
                    }
                    Ok(base.pow(n as i32))
                }
                _ => Err(self.error_here("expected integer exponent after `^`".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Scalar, ParseError> {
        let offset = self
            .toks
            .get(self.pos)
            .map(|t| t.1)
            .unwrap_or(self.src.len());
        match self.bump() {
            Some(Tok::Num(r)) => Ok(Scalar::constant(r)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    match name.as_str() {
                        "exp" => Ok(arg.exp()),
                        "sin" => Ok(arg.sin()),
                        "cos" => Ok(arg.cos()),
                        other => {
                            Err(self.error_at(offset, format!("unknown function `{}`", other)))
                        }
                    }
                } else {
                    match self.names.iter().position(|n| *n == name) {
                        Some(i) => Ok(Scalar::coord(i)),
                        None => {
                            Err(self.error_at(offset, format!("unknown identifier `{}`", name)))
                        }
                    }
                }
            }
            Some(_) => Err(self.error_at(offset, "expected a value".into())),
            None => Err(self.error_at(offset, "unexpected end of expression".into())),
        }
    }
}

/// Parses `text` against coordinate `names`; every identifier must be one of
/// the names (or a known function).
pub fn parse_expr(text: &str, names: &[String]) -> Result<Scalar, ParseError> {
    let lexer = Lexer {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let toks = lexer.tokens()?;
    let mut parser = Parser {
        src: text,
        toks,
        pos: 0,
        names,
    };
    let e = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.error_here("trailing input after expression".into()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DEFAULT_DIV_GUARD;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_polynomial() {
        let f = parse_expr("x^2 + 1", &names(&["x"])).unwrap();
        assert_eq!(f.eval_at(&[3.0], DEFAULT_DIV_GUARD).unwrap(), 10.0);
    }

    #[test]
    fn parses_mixed_terms() {
        let f = parse_expr("x*y - sin(x)", &names(&["x", "y"])).unwrap();
        let v = f.eval_at(&[0.5, 2.0], DEFAULT_DIV_GUARD).unwrap();
        assert!((v - (1.0 - 0.5f64.sin())).abs() < 1e-15);
    }

    #[test]
    fn unknown_identifier_is_an_error() {
        let err = parse_expr("x + z", &names(&["x", "y"])).unwrap_err();
        assert!(err.message.contains("unknown identifier `z`"));
        assert_eq!(err.col, 5);
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_expr("x+", &names(&["x"])).unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col >= 2);
    }

    #[test]
    fn decimal_literals_are_exact() {
        let f = parse_expr("0.25", &names(&[])).unwrap();
        assert_eq!(f.as_const().unwrap(), num::rational::Ratio::new(1, 4));
    }

    #[test]
    fn precedence_and_unary_minus() {
        let f = parse_expr("-x^2 + 2*x", &names(&["x"])).unwrap();
        assert_eq!(f.eval_at(&[3.0], DEFAULT_DIV_GUARD).unwrap(), -3.0);
    }

    #[test]
    fn print_round_trip() {
        let ns = names(&["x", "y"]);
        for text in [
            "x^2 + 1",
            "x*y - sin(x)",
            "(x + 1)*(y - 2)",
            "1/(x + 2)",
            "-x^3 + x/7 - cos(x*y)",
            "exp(x)*sin(y) - 0.5",
        ] {
            let f = parse_expr(text, &ns).unwrap();
            let printed = f.print(&|i| ns[i].clone());
            let g = parse_expr(&printed, &ns).unwrap();
            assert_eq!(f, g, "round trip failed for {} -> {}", text, printed);
        }
    }
}
