//! Recursive-descent reader for rational expressions such as
//! `(p^2*n - 3/2*p)/(n - 2*p)`.

use crate::error::{Error, Result};

use super::mpoly::{MPoly, Var};
use super::{Rat, RatFunc};

pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    let mut p = Parser {
        chars: s.chars().collect(),
        pos: 0,
        src: s,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

pub fn parse_mpoly(s: &str) -> Result<MPoly> {
    let f = parse_ratfunc(s)?;
    if !f.is_polynomial() {
        return Err(Error::Parse(format!("`{s}` is not a polynomial")));
    }
    Ok(f.num().clone())
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc
                    .checked_div(&d)
                    .map_err(|_| self.err("division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            let v = base.pow(e);
            return if neg {
                v.inv().map_err(|_| self.err("division by zero"))
            } else {
                Ok(v)
            };
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let r: Rat = s.parse()?;
                Ok(RatFunc::from_rat(r))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_alphanumeric() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let v = Var::from_name(&s)
                    .ok_or_else(|| Error::Parse(format!("unknown indeterminate `{s}`")))?;
                Ok(RatFunc::var(v))
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}
