//! Append-only verdict log.
//!
//! One line per tested index, keyed by a hash of the sequence spec:
//!
//! ```text
//! 9f1c03a2b4d5e6f7 89 prp 25 27
//! 9f1c03a2b4d5e6f7 90 composite
//! 9f1c03a2b4d5e6f7 7 proven 3
//! ```
//!
//! Prime lines end with the decimal digit count. A torn final line (no newline)
//! is dropped on replay; any other malformed line is an error.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::arith::{ProofMethod, Verdict};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Logged {
    Composite,
    Prime { verdict: Verdict, digits: u64 },
}

/// FNV-1a, stable across platforms and releases.
pub(super) fn log_key(text: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub(super) fn replay(path: &Path, key: u64) -> Result<BTreeMap<u64, Logged>> {
    let mut out = BTreeMap::new();
    if !path.exists() {
        return Ok(out);
    }
    let text = std::fs::read_to_string(path)?;
    let complete = text.ends_with('\n');
    let lines: Vec<&str> = text.lines().collect();
    for (i, line) in lines.iter().enumerate() {
        let torn = !complete && i + 1 == lines.len();
        match parse_line(line) {
            Some((k, n, v)) => {
                if k == key {
                    out.insert(n, v);
                }
            }
            None if torn => break,
            None if line.trim().is_empty() => {}
            None => {
                return Err(Error::Log(format!("{}:{}: malformed line `{line}`", path.display(), i + 1)));
            }
        }
    }
    Ok(out)
}

fn parse_line(line: &str) -> Option<(u64, u64, Logged)> {
    let mut t = line.split_ascii_whitespace();
    let key = u64::from_str_radix(t.next()?, 16).ok()?;
    let n = t.next()?.parse().ok()?;
    let v = match t.next()? {
        "composite" => Logged::Composite,
        "proven" => Logged::Prime {
            verdict: Verdict::ProvenPrime(ProofMethod::Deterministic64),
            digits: t.next()?.parse().ok()?,
        },
        "prp" => {
            let rounds = t.next()?.parse().ok()?;
            Logged::Prime { verdict: Verdict::ProbablePrime { rounds }, digits: t.next()?.parse().ok()? }
        }
        _ => return None,
    };
    if t.next().is_some() {
        return None;
    }
    Some((key, n, v))
}

pub(super) struct LogWriter {
    out: BufWriter<File>,
    key: u64,
}

impl LogWriter {
    pub(super) fn open(path: &Path, key: u64) -> Result<Self> {
        // a torn tail would glue onto the next record
        if let Ok(text) = std::fs::read_to_string(path) {
            if !text.is_empty() && !text.ends_with('\n') {
                let keep = text.rfind('\n').map_or(0, |i| i + 1);
                std::fs::write(path, &text[..keep])?;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(LogWriter { out: BufWriter::new(file), key })
    }

    pub(super) fn append(&mut self, n: u64, v: &Logged) -> Result<()> {
        match v {
            Logged::Composite => writeln!(self.out, "{:016x} {n} composite", self.key)?,
            Logged::Prime { verdict: Verdict::ProbablePrime { rounds }, digits } => {
                writeln!(self.out, "{:016x} {n} prp {rounds} {digits}", self.key)?
            }
            Logged::Prime { digits, .. } => writeln!(self.out, "{:016x} {n} proven {digits}", self.key)?,
        }
        Ok(())
    }

    pub(super) fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}
