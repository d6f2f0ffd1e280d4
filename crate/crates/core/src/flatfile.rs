//! Line-oriented, self-describing model file format.
//!
//! Each line is `key tok tok ...` separated by single spaces. Reals are written
//! with Rust's shortest round-trip representation, so `write -> read` restores
//! every `f64` bit for bit. Readers consume lines strictly in order and name
//! the expected key, which keeps format drift loud.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: expected key `{expected}`, found `{found}`")]
    UnexpectedKey {
        line: usize,
        expected: String,
        found: String,
    },
    #[error("line {line}: unexpected end of file, expected `{expected}`")]
    Eof { line: usize, expected: String },
    #[error("line {line}: bad value `{value}` for `{key}`")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("line {line}: `{key}` has {found} values, expected {expected}")]
    Arity {
        line: usize,
        key: String,
        expected: usize,
        found: usize,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Default)]
pub struct FlatWriter {
    buf: String,
}

impl FlatWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn line<I, T>(&mut self, key: &str, values: I) -> &mut Self
    where
        I: IntoIterator<Item = T>,
        T: std::fmt::Display,
    {
        self.buf.push_str(key);
        for v in values {
            let _ = write!(self.buf, " {v}");
        }
        self.buf.push('\n');
        self
    }

    pub fn value<T: std::fmt::Display>(&mut self, key: &str, value: T) -> &mut Self {
        self.line(key, [value])
    }

    pub fn real(&mut self, key: &str, value: f64) -> &mut Self {
        self.reals(key, &[value])
    }

    pub fn reals(&mut self, key: &str, values: &[f64]) -> &mut Self {
        self.buf.push_str(key);
        for v in values {
            let _ = write!(self.buf, " {v:?}");
        }
        self.buf.push('\n');
        self
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub struct FlatReader<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> FlatReader<'a> {
    pub fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().filter(|l| !l.trim().is_empty()).collect(),
            pos: 0,
        }
    }

    pub fn line_no(&self) -> usize {
        self.pos
    }

    pub fn is_done(&self) -> bool {
        self.pos >= self.lines.len()
    }

    /// Key of the next line without consuming it.
    pub fn peek_key(&self) -> Option<&'a str> {
        self.lines.get(self.pos).and_then(|l| l.split(' ').next())
    }

    /// Consumes the next line, which must start with `key`, returning its tokens.
    pub fn tokens(&mut self, key: &str) -> Result<Vec<&'a str>, FormatError> {
        let Some(line) = self.lines.get(self.pos) else {
            return Err(FormatError::Eof {
                line: self.pos + 1,
                expected: key.to_string(),
            });
        };
        let mut parts = line.split(' ');
        let found = parts.next().unwrap_or("");
        if found != key {
            return Err(FormatError::UnexpectedKey {
                line: self.pos + 1,
                expected: key.to_string(),
                found: found.to_string(),
            });
        }
        self.pos += 1;
        Ok(parts.collect())
    }

    /// Consumes a line and returns the remainder verbatim.
    pub fn text(&mut self, key: &str) -> Result<String, FormatError> {
        Ok(self.tokens(key)?.join(" "))
    }

    pub fn parse<T: FromStr>(&mut self, key: &str) -> Result<T, FormatError> {
        let line = self.pos + 1;
        let toks = self.tokens(key)?;
        if toks.len() != 1 {
            return Err(FormatError::Arity {
                line,
                key: key.to_string(),
                expected: 1,
                found: toks.len(),
            });
        }
        parse_token(line, key, toks[0])
    }

    /// Reads a line of exactly `n` reals.
    pub fn reals(&mut self, key: &str, n: usize) -> Result<Vec<f64>, FormatError> {
        let line = self.pos + 1;
        let toks = self.tokens(key)?;
        if toks.len() != n {
            return Err(FormatError::Arity {
                line,
                key: key.to_string(),
                expected: n,
                found: toks.len(),
            });
        }
        toks.iter().map(|t| parse_token(line, key, t)).collect()
    }
}

pub fn parse_token<T: FromStr>(line: usize, key: &str, tok: &str) -> Result<T, FormatError> {
    tok.parse().map_err(|_| FormatError::BadValue {
        line,
        key: key.to_string(),
        value: tok.to_string(),
    })
}
