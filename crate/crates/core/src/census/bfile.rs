use std::collections::BTreeSet;

use rug::Integer;
use serde::{Deserialize, Serialize};

use super::CensusReport;
use crate::{Error, Result};

/// Parses OEIS b-file text: `n a(n)` per line, `#` comments and blank lines skipped.
pub fn parse_bfile(text: &str) -> Result<Vec<(u64, Integer)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| Error::BFile { line: i + 1, reason };
        let mut t = line.split_ascii_whitespace();
        let (Some(a), Some(b), None) = (t.next(), t.next(), t.next()) else {
            return Err(err(format!("expected `n a(n)`, got `{line}`")));
        };
        let n = a.parse::<u64>().map_err(|_| err(format!("bad index `{a}`")))?;
        let v = b.parse::<Integer>().map_err(|_| err(format!("bad value `{b}`")))?;
        out.push((n, v));
    }
    Ok(out)
}

/// The values of a b-file whose terms are sequence indices (as for A000043).
pub fn bfile_indices(entries: &[(u64, Integer)]) -> Result<Vec<u64>> {
    entries
        .iter()
        .map(|(n, v)| {
            v.to_u64().ok_or_else(|| Error::BFile { line: *n as usize, reason: format!("index {v} out of range") })
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    /// Compared range is `[1, upper]`.
    pub upper: u64,
    pub only_in_report: Vec<u64>,
    pub only_in_bfile: Vec<u64>,
}

impl CrossCheck {
    pub fn is_empty(&self) -> bool {
        self.only_in_report.is_empty() && self.only_in_bfile.is_empty()
    }
}

/// Symmetric difference of hit indices on `[1, min(N, max b-file index)]`.
pub fn crosscheck(report: &CensusReport, indices: &[u64]) -> CrossCheck {
    let upper = report.n_max.min(indices.iter().copied().max().unwrap_or(0));
    let mine: BTreeSet<u64> = report.hits.iter().map(|h| h.n).filter(|&n| (1..=upper).contains(&n)).collect();
    let theirs: BTreeSet<u64> = indices.iter().copied().filter(|&n| (1..=upper).contains(&n)).collect();
    CrossCheck {
        upper,
        only_in_report: mine.difference(&theirs).copied().collect(),
        only_in_bfile: theirs.difference(&mine).copied().collect(),
    }
}
