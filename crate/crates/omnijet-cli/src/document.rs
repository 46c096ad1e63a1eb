//! The structured-text document format: nested key-value blocks whose
//! expression values are strings in the scalar grammar.
//!
//! ```text
//! document := block*
//! block    := ident ident* "{" entry* "}"
//! entry    := ident "=" value | block
//! value    := string | number | ident | "[" (value ("," value)*)? "]"
//! ```
//!
//! `#` starts a comment running to the end of the line. Commas between
//! entries are optional.

use std::fmt;

#[derive(Debug, Clone)]
pub struct DocError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at line {}, column {}", self.message, self.line, self.col)
    }
}

impl std::error::Error for DocError {}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Str(String),
    Num(f64),
    Ident(String),
    List(Vec<Value>),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Str(_) => "string",
            Value::Num(_) => "number",
            Value::Ident(_) => "identifier",
            Value::List(_) => "list",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub key: String,
    pub value: Value,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone)]
pub struct Block {
    /// Head words: block kind followed by qualifiers, e.g.
    /// `["structure", "jacobi", "J8"]` or `["check", "classify", "J8"]`.
    pub words: Vec<String>,
    pub entries: Vec<Entry>,
    pub blocks: Vec<Block>,
    pub line: u32,
    pub col: u32,
}

impl Block {
    pub fn kind(&self) -> &str {
        &self.words[0]
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|e| e.key == key).map(|e| &e.value)
    }

    pub fn error(&self, message: impl Into<String>) -> DocError {
        DocError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Document {
    pub blocks: Vec<Block>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Num(f64),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Equals,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied();
        if let Some(c) = c {
            self.pos += 1;
            if c == b'\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        c
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> DocError {
        DocError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, u32, u32)>, DocError> {
        let mut out = Vec::new();
        loop {
            // skip whitespace and comments
            loop {
                match self.peek() {
                    Some(b' ') | Some(b'\t') | Some(b'\r') | Some(b'\n') => {
                        self.bump();
                    }
                    Some(b'#') => {
                        while let Some(c) = self.peek() {
                            if c == b'\n' {
                                break;
                            }
                            self.bump();
                        }
                    }
                    _ => break,
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                return Ok(out);
            };
            let tok = match c {
                b'{' => {
                    self.bump();
                    Tok::LBrace
                }
                b'}' => {
                    self.bump();
                    Tok::RBrace
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b'=' => {
                    self.bump();
                    Tok::Equals
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b'"' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            None => return Err(self.error("unterminated string")),
                            Some(b'"') => break,
                            Some(b'\\') => match self.bump() {
                                Some(b'"') => s.push('"'),
                                Some(b'\\') => s.push('\\'),
                                Some(b'n') => s.push('\n'),
                                _ => return Err(self.error("bad escape in string")),
                            },
                            Some(c) => s.push(c as char),
                        }
                    }
                    Tok::Str(s)
                }
                c if c.is_ascii_digit() || c == b'-' || c == b'+' || c == b'.' => {
                    let start = self.pos;
                    self.bump();
                    while let Some(d) = self.peek() {
                        if d.is_ascii_digit()
                            || d == b'.'
                            || d == b'e'
                            || d == b'E'
                            || d == b'-'
                            || d == b'+'
                        {
                            // signs only directly after an exponent marker
                            if (d == b'-' || d == b'+')
                                && !matches!(self.src.get(self.pos - 1), Some(b'e') | Some(b'E'))
                            {
                                break;
                            }
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let v: f64 = text
                        .parse()
                        .map_err(|_| self.error(format!("bad number `{}`", text)))?;
                    Tok::Num(v)
                }
                c if (c as char).is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    self.bump();
                    while let Some(d) = self.peek() {
                        if (d as char).is_ascii_alphanumeric() || d == b'_' {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    Tok::Ident(text.to_string())
                }
                other => {
                    return Err(self.error(format!("unexpected character `{}`", other as char)))
                }
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, u32, u32)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (u32, u32) {
        self.toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .or_else(|| self.toks.last().map(|t| (t.1, t.2)))
            .unwrap_or((1, 1))
    }

    fn error(&self, message: impl Into<String>) -> DocError {
        let (line, col) = self.here();
        DocError {
            line,
            col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn ident(&mut self, what: &str) -> Result<String, DocError> {
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error(format!("expected {}", what)))
            }
        }
    }

    fn block(&mut self) -> Result<Block, DocError> {
        let (line, col) = self.here();
        let mut words = vec![self.ident("a block kind")?];
        while let Some(Tok::Ident(_)) = self.peek() {
            words.push(self.ident("a block word")?);
        }
        match self.bump() {
            Some(Tok::LBrace) => {}
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.error("expected `{` after block head"));
            }
        }
        let mut entries = Vec::new();
        let mut blocks = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::RBrace) => {
                    self.bump();
                    break;
                }
                Some(Tok::Comma) => {
                    self.bump();
                }
                Some(Tok::Ident(_)) => {
                    // lookahead: ident "=" is an entry, otherwise a nested block
                    let save = self.pos;
                    let key = self.ident("a key")?;
                    if self.peek() == Some(&Tok::Equals) {
                        let (eline, ecol) = self.here();
                        self.bump();
                        let value = self.value()?;
                        entries.push(Entry {
                            key,
                            value,
                            line: eline,
                            col: ecol,
                        });
                    } else {
                        self.pos = save;
                        blocks.push(self.block()?);
                    }
                }
                Some(_) => return Err(self.error("expected a key, nested block, or `}`")),
                None => return Err(self.error("unterminated block")),
            }
        }
        Ok(Block {
            words,
            entries,
            blocks,
            line,
            col,
        })
    }

    fn value(&mut self) -> Result<Value, DocError> {
        match self.bump() {
            Some(Tok::Str(s)) => Ok(Value::Str(s)),
            Some(Tok::Num(v)) => Ok(Value::Num(v)),
            Some(Tok::Ident(s)) => Ok(Value::Ident(s)),
            Some(Tok::LBracket) => {
                let mut items = Vec::new();
                loop {
                    match self.peek() {
                        Some(Tok::RBracket) => {
                            self.bump();
                            return Ok(Value::List(items));
                        }
                        Some(Tok::Comma) => {
                            self.bump();
                        }
                        Some(_) => items.push(self.value()?),
                        None => return Err(self.error("unterminated list")),
                    }
                }
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error("expected a value"))
            }
        }
    }
}

pub fn parse_document(src: &str) -> Result<Document, DocError> {
    let toks = Lexer {
        src: src.as_bytes(),
        pos: 0,
        line: 1,
        col: 1,
    }
    .tokens()?;
    let mut parser = Parser { toks, pos: 0 };
    let mut blocks = Vec::new();
    while parser.peek().is_some() {
        blocks.push(parser.block()?);
    }
    Ok(Document { blocks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_blocks_and_values() {
        let doc = parse_document(
            r#"
# a comment
chart { coords = [x, y] }
structure jacobi J8 {
  lambda = ["-x"]
  gamma = ["0", "1"]
}
check classify J8 { expect = "dirac_jacobi" }
"#,
        )
        .unwrap();
        assert_eq!(doc.blocks.len(), 3);
        assert_eq!(doc.blocks[1].words, vec!["structure", "jacobi", "J8"]);
        match doc.blocks[1].get("lambda") {
            Some(Value::List(items)) => assert_eq!(items.len(), 1),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_document("chart {\n  coords = \n}").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_document("chart { coords = [x, y]").unwrap_err();
        assert!(err.message.contains("unterminated"));
    }

    #[test]
    fn nested_lists_and_numbers() {
        let doc = parse_document("a { xs = [[1, -2.5], [3e-2]] }").unwrap();
        match doc.blocks[0].get("xs") {
            Some(Value::List(rows)) => {
                assert_eq!(rows.len(), 2);
                match &rows[0] {
                    Value::List(items) => assert_eq!(items[1], Value::Num(-2.5)),
                    other => panic!("unexpected {:?}", other),
                }
            }
            other => panic!("unexpected {:?}", other),
        }
    }
}
