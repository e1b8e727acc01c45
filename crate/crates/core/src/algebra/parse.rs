//! Text grammar shared by every file format.
//!
//! A multi-index is a concatenation of `z(i,k)` or `z(i,k)^m` factors, `1` is
//! the empty forest, and forest components are joined by `*`. Whitespace is
//! ignored. Formal sums are written as `±(p/q) term` summands.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::formal_sum::{Coeff, FormalSum};
use super::{Forest, MultiIndex};
use crate::error::{Error, Result};

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Self { s: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(format!("expected '{}', found '{}'", c as char, x as char)),
            None => self.err(format!("expected '{}', found end of input", c as char)),
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            return self.err("negative numbers are not allowed here");
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a digit");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(txt.parse().expect("digits parse"))
    }

    fn small(&mut self) -> Result<u32> {
        let at = self.pos;
        let n = self.number()?;
        u32::try_from(n).map_err(|_| Error::Parse { pos: at, msg: "index too large".into() })
    }

    fn multi_index(&mut self) -> Result<MultiIndex> {
        let mut entries = Vec::new();
        loop {
            match self.peek() {
                Some(b'z') => {
                    self.pos += 1;
                    self.expect(b'(')?;
                    let i = self.small()?;
                    self.expect(b',')?;
                    let k = self.small()?;
                    self.expect(b')')?;
                    let mut m = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let at = self.pos;
                        m = self.small()?;
                        if m == 0 {
                            return Err(Error::Parse { pos: at, msg: "zero exponent".into() });
                        }
                    }
                    entries.push(((i, k), m));
                }
                _ => break,
            }
        }
        if entries.is_empty() {
            return self.err("expected 'z(i,k)' factor");
        }
        Ok(MultiIndex::from_entries(entries))
    }

    fn forest(&mut self) -> Result<Forest> {
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(Forest::empty());
        }
        let mut items = vec![self.multi_index()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            items.push(self.multi_index()?);
        }
        Ok(Forest::from_items(items))
    }

    fn rational(&mut self) -> Result<Coeff> {
        let p = self.number()?;
        let mut q = BigInt::one();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            q = self.number()?;
            if q.is_zero() {
                return Err(Error::Parse { pos: at, msg: "zero denominator".into() });
            }
        }
        Ok(BigRational::new(p, q))
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
        }
    }
}

pub fn parse_multi_index(s: &str) -> Result<MultiIndex> {
    let mut lx = Lexer::new(s);
    if lx.peek() == Some(b'1') {
        lx.pos += 1;
        lx.finish()?;
        return Ok(MultiIndex::one());
    }
    let m = lx.multi_index()?;
    lx.finish()?;
    Ok(m)
}

pub fn parse_forest(s: &str) -> Result<Forest> {
    let mut lx = Lexer::new(s);
    let f = lx.forest()?;
    lx.finish()?;
    Ok(f)
}

/// Parse `+(1/2) z(1,0)z(1,1) -(3) 1 ...`; an empty string is the zero sum.
pub fn parse_forest_sum(s: &str) -> Result<FormalSum<Forest>> {
    let mut lx = Lexer::new(s);
    let mut out = FormalSum::zero();
    while let Some(c) = lx.peek() {
        let neg = match c {
            b'+' => false,
            b'-' => true,
            _ => return lx.err("expected '+' or '-' before a summand"),
        };
        lx.pos += 1;
        lx.expect(b'(')?;
        let mut r = lx.rational()?;
        lx.expect(b')')?;
        if neg {
            r = -r;
        }
        let f = lx.forest()?;
        out.add_term(f, r);
    }
    Ok(out)
}

pub fn parse_rational(s: &str) -> Result<Coeff> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t),
    };
    let mut lx = Lexer::new(body);
    let r = lx.rational()?;
    lx.finish()?;
    Ok(if neg { -r } else { r })
}

pub fn format_rational(c: &Coeff) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for &((i, k), m) in self.entries() {
            if m == 1 {
                write!(f, "z({i},{k})")?;
            } else {
                write!(f, "z({i},{k})^{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (j, m) in self.items().iter().enumerate() {
            if j > 0 {
                write!(f, "*")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

fn write_sum<B: Ord>(
    f: &mut fmt::Formatter<'_>,
    s: &FormalSum<B>,
    mut item: impl FnMut(&mut fmt::Formatter<'_>, &B) -> fmt::Result,
) -> fmt::Result
where
    B: Clone,
{
    if s.is_zero() {
        return write!(f, "0");
    }
    for (j, (b, c)) in s.iter().enumerate() {
        if j > 0 {
            write!(f, " ")?;
        }
        let sign = if c.is_negative() { '-' } else { '+' };
        write!(f, "{sign}({}) ", format_rational(&c.abs()))?;
        item(f, b)?;
    }
    Ok(())
}

impl fmt::Display for FormalSum<Forest> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self, |f, b| write!(f, "{b}"))
    }
}

impl fmt::Display for FormalSum<MultiIndex> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self, |f, b| write!(f, "{b}"))
    }
}

impl fmt::Display for FormalSum<(Forest, Forest)> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self, |f, (a, b)| write!(f, "{a} ⊗ {b}"))
    }
}

impl fmt::Display for FormalSum<(Forest, MultiIndex)> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self, |f, (a, b)| write!(f, "{a} ⊗ {b}"))
    }
}
