//! Recursive-descent parser for the set DSL.
//!
//! ```text
//! spec    := "periodic(" int ";" intlist ")" | "ap(" int ";" int ")"
//!          | "bohr(" reallist ";" real [";" int] ")" | "random(" real ";" int ")"
//!          | "explicit(" intlist ")" | "union(" spec "," spec ")"
//!          | "intersect(" spec "," spec ")" | "shift(" spec ";" int ")"
//!          | "diff(" spec "," spec ")"
//! intlist := int { "," int }      reallist := real { "," real }
//! real    := int | digits "." digits | int "/" int
//! ```
//!
//! Whitespace between tokens is ignored.

use crate::bohr::BohrSpec;
use crate::error::{Error, Result};
use crate::real::{Real, Q};

use super::spec::SetSpec;

const MAX_DEPTH: usize = 256;

pub fn parse(text: &str) -> Result<SetSpec> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, depth: 0 };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(spec)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn range_error(&self, at: usize, msg: impl std::fmt::Display) -> Error {
        Error::OutOfRange(format!("{msg} (at position {at})"))
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

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.error(format!("expected '{}', found '{}'", c as char, x as char))),
            None => Err(self.error(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_lowercase() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a constructor name"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.src.get(self.pos) == Some(&b'-');
        if neg {
            self.pos += 1;
        }
        let d = self.digits();
        if d.is_empty() {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().map_err(|_| Error::Syntax { pos: start, msg: format!("integer {text} out of range") })
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let d = self.digits();
        if d.is_empty() {
            return Err(self.error("expected a nonnegative integer"));
        }
        d.parse().map_err(|_| Error::Syntax { pos: start, msg: format!("integer {d} out of range") })
    }

    fn real(&mut self) -> Result<Real> {
        self.skip_ws();
        let start = self.pos;
        let whole = self.digits().to_string();
        if whole.is_empty() {
            return Err(self.error("expected a real number"));
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            if self.digits().is_empty() {
                return Err(self.error("expected digits after '.'"));
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let x: f64 = text.parse().map_err(|_| Error::Syntax { pos: start, msg: format!("bad real {text}") })?;
            return Ok(Real::Float(x));
        }
        let num: i64 = whole
            .parse()
            .map_err(|_| Error::Syntax { pos: start, msg: format!("integer {whole} out of range") })?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.uint()?;
            if den == 0 || den > i64::MAX as u64 {
                return Err(self.range_error(at, "denominator must be in 1..2^63"));
            }
            return Ok(Real::Rational(Q::new(num, den as i64)));
        }
        Ok(Real::Rational(Q::from_integer(num)))
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = vec![item(self)?];
        while self.eat(b',') {
            out.push(item(self)?);
        }
        Ok(out)
    }

    fn pair(&mut self) -> Result<(SetSpec, SetSpec)> {
        let a = self.spec()?;
        self.expect(b',')?;
        let b = self.spec()?;
        self.expect(b')')?;
        Ok((a, b))
    }

    fn spec(&mut self) -> Result<SetSpec> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        let start = { self.skip_ws(); self.pos };
        let name = self.ident()?.to_string();
        self.expect(b'(')?;
        let spec = match name.as_str() {
            "periodic" => {
                let at = self.pos;
                let p = self.int()?;
                self.expect(b';')?;
                let rs = self.list(Self::int)?;
                self.expect(b')')?;
                if p < 1 {
                    return Err(self.range_error(at, format!("period must be >= 1, got {p}")));
                }
                SetSpec::periodic(p, rs)?
            }
            "ap" => {
                let start = self.int()?;
                self.expect(b';')?;
                let at = self.pos;
                let step = self.int()?;
                self.expect(b')')?;
                SetSpec::ap(start, step).map_err(|e| self.range_error(at, e))?
            }
            "bohr" => {
                let freqs = self.list(Self::real)?;
                self.expect(b';')?;
                let eps = self.real()?;
                let shift = if self.eat(b';') { self.int()? } else { 0 };
                self.expect(b')')?;
                SetSpec::Bohr(BohrSpec::new(freqs, eps, shift).map_err(|e| self.range_error(start, e))?)
            }
            "random" => {
                let density = self.real()?;
                self.expect(b';')?;
                let seed = self.uint()?;
                self.expect(b')')?;
                SetSpec::random(density, seed).map_err(|e| self.range_error(start, e))?
            }
            "explicit" => {
                let v = self.list(Self::int)?;
                self.expect(b')')?;
                SetSpec::explicit(v)?
            }
            "union" => {
                let (a, b) = self.pair()?;
                SetSpec::union(a, b)
            }
            "intersect" => {
                let (a, b) = self.pair()?;
                SetSpec::intersect(a, b)
            }
            "diff" => {
                let (a, b) = self.pair()?;
                SetSpec::diff(a, b)
            }
            "shift" => {
                let a = self.spec()?;
                self.expect(b';')?;
                let n = self.int()?;
                self.expect(b')')?;
                SetSpec::shift(a, n)
            }
            other => {
                return Err(Error::Syntax { pos: start, msg: format!("unknown constructor {other:?}") });
            }
        };
        self.depth -= 1;
        Ok(spec)
    }
}
