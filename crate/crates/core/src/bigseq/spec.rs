//! The textual sequence grammar used by the CLI and config files.
//!
//! ```text
//! geom:a,b | twoterm:alpha,beta[,div] | lucas:a,b | fibshift:c | repunit:p,base
//! custom:[a1,...,ak];[u0,...,uk-1] | combine:q;spec;...;spec
//! ```
//!
//! `combine` takes exactly `q` sub-specs, so nesting is unambiguous.

use std::fmt;

use rug::Integer;

use super::{Family, LinearRecurrence};
use crate::{Error, Result};

pub fn parse_spec(s: &str) -> Result<LinearRecurrence> {
    let mut p = Parser { src: s, pos: 0 };
    let rec = p.spec()?;
    if p.pos != s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(rec)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, reason: &str) -> Error {
        Error::SpecSyntax {
            spec: self.src.to_string(),
            reason: format!("{reason} at offset {}", self.pos),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        let len = self.rest().find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn int(&mut self) -> Result<Integer> {
        let start = self.pos;
        self.eat('-');
        let digits = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if digits == 0 {
            return Err(self.err("expected integer"));
        }
        self.pos += digits;
        Ok(self.src[start..self.pos].parse().expect("validated digits"))
    }

    fn int_list(&mut self) -> Result<Vec<Integer>> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn small<T: TryFrom<u64>>(&self, v: &Integer, what: &str) -> Result<T> {
        v.to_u64()
            .and_then(|x| T::try_from(x).ok())
            .ok_or_else(|| self.err(&format!("{what} out of range")))
    }

    fn spec(&mut self) -> Result<LinearRecurrence> {
        let kind = self.word().to_string();
        self.expect(':')?;
        match kind.as_str() {
            "geom" => {
                let a = self.int()?;
                self.expect(',')?;
                let b = self.int()?;
                LinearRecurrence::geometric_shift(a, b)
            }
            "twoterm" => {
                let alpha = self.int()?;
                self.expect(',')?;
                let beta = self.int()?;
                let divided = if self.rest().starts_with(",div") {
                    self.pos += 4;
                    true
                } else {
                    false
                };
                LinearRecurrence::two_term(alpha, beta, divided)
            }
            "lucas" => {
                let a = self.int()?;
                self.expect(',')?;
                let b = self.int()?;
                LinearRecurrence::lucas(a, b)
            }
            "fibshift" => Ok(LinearRecurrence::fibonacci_shift(self.int()?)),
            "repunit" => {
                let p = self.int()?;
                let p: u32 = self.small(&p, "p")?;
                self.expect(',')?;
                let base = self.int()?;
                LinearRecurrence::repunit_ratio(p, base)
            }
            "custom" => {
                let coeffs = self.int_list()?;
                self.expect(';')?;
                let init = self.int_list()?;
                LinearRecurrence::new(coeffs, init)
            }
            "combine" => {
                let q = self.int()?;
                let q: usize = self.small(&q, "q")?;
                if q < 2 {
                    return Err(self.err("combine needs q >= 2"));
                }
                let mut parts = Vec::with_capacity(q);
                for _ in 0..q {
                    self.expect(';')?;
                    parts.push(self.spec()?);
                }
                LinearRecurrence::combine(parts)
            }
            "" => Err(self.err("expected sequence kind")),
            other => Err(self.err(&format!("unknown sequence kind '{other}'"))),
        }
    }
}

fn list(f: &mut fmt::Formatter<'_>, v: &[Integer]) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

pub(super) fn write_spec(rec: &LinearRecurrence, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match rec.family() {
        Family::Generic => {
            write!(f, "custom:")?;
            list(f, rec.coefficients())?;
            write!(f, ";")?;
            list(f, rec.initial_terms())
        }
        Family::GeometricShift { a, b } => write!(f, "geom:{a},{b}"),
        Family::TwoTerm { alpha, beta, divided } => {
            write!(f, "twoterm:{alpha},{beta}{}", if *divided { ",div" } else { "" })
        }
        Family::Lucas { a, b } => write!(f, "lucas:{a},{b}"),
        Family::FibonacciShift { c } => write!(f, "fibshift:{c}"),
        Family::RepunitRatio { p, base } => write!(f, "repunit:{p},{base}"),
        Family::Combination { parts } => {
            write!(f, "combine:{}", parts.len())?;
            for part in parts {
                write!(f, ";")?;
                write_spec(part, f)?;
            }
            Ok(())
        }
    }
}
