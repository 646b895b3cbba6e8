//! Shared lexer for the polynomial and formula text formats.

use crate::error::Error;
use crate::var::VarId;

pub(crate) struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(s: &'a str) -> Self {
        Cursor { src: s.as_bytes(), pos: 0 }
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Next byte after skipping whitespace.
    pub fn peek_token(&mut self) -> Option<u8> {
        self.skip_ws();
        self.peek()
    }

    pub fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: u8) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    pub fn unsigned(&mut self) -> Result<u64, Error> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })
    }

    /// Optionally signed decimal integer.
    pub fn integer(&mut self) -> Result<i64, Error> {
        let neg = self.eat(b'-');
        let start = self.pos;
        let v = self.unsigned()?;
        let v = i64::try_from(v).map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })?;
        Ok(if neg { -v } else { v })
    }

    fn bracketed(&mut self) -> Result<usize, Error> {
        self.expect(b'[')?;
        let v = self.unsigned()?;
        self.expect(b']')?;
        Ok(v as usize)
    }

    pub fn var(&mut self) -> Result<VarId, Error> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let i = self.bracketed()?;
                let u = self.bracketed()?;
                let v = self.bracketed()?;
                if i == 0 || !(1..=2).contains(&u) || !(1..=2).contains(&v) {
                    return Err(Error::Parse { pos: start, msg: format!("bad matrix variable x[{i}][{u}][{v}]") });
                }
                Ok(VarId::x(i, u, v))
            }
            Some(c @ (b'y' | b'z')) => {
                self.pos += 1;
                let j = self.bracketed()?;
                if j == 0 {
                    return Err(Error::Parse { pos: start, msg: "y/z indices start at 1".into() });
                }
                Ok(if c == b'y' { VarId::y(j) } else { VarId::z(j) })
            }
            _ => Err(self.error("expected a variable")),
        }
    }
}
