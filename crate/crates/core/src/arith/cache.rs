//! Persistent factorization cache.
//!
//! One line per number: `n p1 p2 ...` in ASCII decimal, primes with multiplicity.
//! Only complete factorizations are stored.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rug::Integer;

use super::factor::{factorize, FactorEffort, FactorizationResult};
use crate::{Error, Result};

pub struct FactorCache {
    map: Mutex<HashMap<Integer, Vec<Integer>>>,
    path: Option<PathBuf>,
}

impl Default for FactorCache {
    fn default() -> Self {
        Self::in_memory()
    }
}

impl FactorCache {
    pub fn in_memory() -> Self {
        FactorCache { map: Mutex::new(HashMap::new()), path: None }
    }

    /// Opens (or creates on first insert) a cache file; lines that fail to parse are errors.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut map = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut nums = line.split_ascii_whitespace().map(|t| t.parse::<Integer>());
                let bad = |reason: &str| Error::Log(format!("{}:{}: {reason}", path.display(), i + 1));
                let n = nums.next().unwrap().map_err(|_| bad("bad number"))?;
                let primes: Vec<Integer> = nums.collect::<std::result::Result<_, _>>().map_err(|_| bad("bad factor"))?;
                let prod = primes.iter().fold(Integer::from(1), |a, p| a * p);
                if prod != n {
                    return Err(bad("factors do not multiply to n"));
                }
                map.insert(n, primes);
            }
        }
        Ok(FactorCache { map: Mutex::new(map), path: Some(path) })
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cached factorization of `n`, computing and recording it if absent.
    ///
    /// The lock is held during computation so each number is factored once.
    pub fn factorize(&self, n: &Integer, effort: &FactorEffort) -> Result<FactorizationResult> {
        let abs = Integer::from(n.abs_ref());
        let negative = *n < 0;
        let mut map = self.map.lock().unwrap();
        if let Some(primes) = map.get(&abs) {
            return Ok(FactorizationResult::from_parts(negative, primes.clone(), None));
        }
        let f = factorize(&abs, effort);
        if f.is_complete() {
            let primes = f.primes();
            if let Some(path) = &self.path {
                let mut file = OpenOptions::new().create(true).append(true).open(path)?;
                let mut line = abs.to_string();
                for p in &primes {
                    line.push(' ');
                    line.push_str(&p.to_string());
                }
                writeln!(file, "{line}")?;
            }
            map.insert(abs, primes.clone());
            return Ok(FactorizationResult::from_parts(negative, primes, None));
        }
        Ok(FactorizationResult::from_parts(negative, f.primes(), f.cofactor().cloned()))
    }
}
