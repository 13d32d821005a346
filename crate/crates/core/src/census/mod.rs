//! Prime values `Pi_u(N) = #{1 <= n <= N : u_n prime}`.
//!
//! Each index goes through a fixed pipeline: terms that fit in a machine word
//! get a deterministic test; larger terms are dropped if a sieving prime divides
//! them, then tried against `kp + 1` divisors where the family allows it, and
//! finally given a probable-prime test. Work is split into blocks of 64 indices
//! and merged back in index order, so reports do not depend on the thread count.

mod bfile;
mod log;
mod sieve;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, is_probable_prime, trial_division, Evidence, KpOne, PrpPolicy, TrialConfig, Verdict};
use crate::bigseq::{Family, LinearRecurrence};
use crate::{Error, Result};

pub use bfile::{bfile_indices, crosscheck, parse_bfile, CrossCheck};
use log::{log_key, replay, LogWriter, Logged};

const BLOCK: usize = 64;
const CHUNK: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CensusPolicy {
    pub prp: PrpPolicy,
    /// Largest sieving prime; `None` picks one from `N`, `Some(0)` disables the sieve.
    pub sieve_bound: Option<u64>,
    /// `k` limit for `kp + 1` trial divisors.
    pub kp_k_max: u64,
    /// Count `n` with `|u_n|` prime and `u_n < 0` as well.
    pub count_negative: bool,
    pub threads: Option<usize>,
    /// Verdict log to replay and extend.
    pub log: Option<PathBuf>,
}

impl Default for CensusPolicy {
    fn default() -> Self {
        CensusPolicy { prp: PrpPolicy::default(), sieve_bound: None, kp_k_max: 4096, count_negative: false, threads: None, log: None }
    }
}

impl CensusPolicy {
    fn sieve_bound_for(&self, max_index: u64) -> u64 {
        let b = self.sieve_bound.unwrap_or_else(|| max_index.saturating_mul(16).clamp(1 << 10, 1 << 20));
        b.min(u32::MAX as u64)
    }

    pub fn fingerprint(&self, max_index: u64) -> PolicyFingerprint {
        PolicyFingerprint {
            prp_seed: self.prp.seed,
            prp_rounds: self.prp.rounds,
            sieve_bound: self.sieve_bound_for(max_index),
            kp_k_max: self.kp_k_max,
            count_negative: self.count_negative,
        }
    }
}

/// The policy fields that can change a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyFingerprint {
    pub prp_seed: u64,
    pub prp_rounds: u32,
    pub sieve_bound: u64,
    pub kp_k_max: u64,
    pub count_negative: bool,
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// `u_n <= 1`.
    Size,
    /// The term fits in 64 bits.
    Deterministic,
    Sieve,
    Trial,
    Prp,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Size => "size",
            Method::Deterministic => "deterministic",
            Method::Sieve => "sieve",
            Method::Trial => "trial",
            Method::Prp => "prp",
        }
    }
}

/// Which indices were examined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Pruning {
    None,
    /// Prime `n` and `n <= (n_0 - 1)^2`.
    DivisionIndex { n0: u64 },
    /// `n = p^m`.
    PrimePower { p: u64 },
    /// An explicit index list.
    Indices,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub n: u64,
    pub digits: u64,
    pub verdict: Verdict,
    pub method: Method,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub spec: LinearRecurrence,
    pub n_max: u64,
    pub pruning: Pruning,
    pub hits: Vec<Hit>,
    /// Hit counts at `N = 10^2, 10^3, ...` up to `n_max`.
    pub checkpoints: Vec<Checkpoint>,
    pub policy: PolicyFingerprint,
    /// Indices examined, including those replayed from a log.
    pub tested: u64,
    pub wall_seconds: f64,
    pub partial: bool,
}

impl CensusReport {
    pub fn count(&self) -> usize {
        self.hits.len()
    }

    pub fn indices(&self) -> Vec<u64> {
        self.hits.iter().map(|h| h.n).collect()
    }

    pub fn count_up_to(&self, n: u64) -> usize {
        self.hits.partition_point(|h| h.n <= n)
    }

    /// Equality ignoring wall time.
    pub fn same_results(&self, other: &CensusReport) -> bool {
        CensusReport { wall_seconds: 0.0, ..self.clone() } == CensusReport { wall_seconds: 0.0, ..other.clone() }
    }
}

/// All `1 <= n <= N`.
pub fn census(rec: &LinearRecurrence, n_max: u64, policy: &CensusPolicy) -> Result<CensusReport> {
    let indices: Vec<u64> = (1..=n_max).collect();
    run(rec, n_max, &indices, Pruning::None, policy)
}

/// For a division sequence whose terms exceed 1 and increase from `n_0` on:
/// a prime `u_n` needs `n` prime or `n <= (n_0 - 1)^2`.
pub fn division_seq_census(rec: &LinearRecurrence, n_max: u64, n0: Option<u64>, policy: &CensusPolicy) -> Result<CensusReport> {
    if !rec.is_division_sequence() {
        return Err(Error::Domain(format!("{rec} is not tagged as a division sequence")));
    }
    let n0 = n0.ok_or_else(|| Error::Domain("division-sequence pruning needs the threshold n_0".into()))?;
    let small = n0.saturating_sub(1).saturating_mul(n0.saturating_sub(1));
    let indices: Vec<u64> = (1..=n_max).filter(|&n| n <= small || is_prime_u64(n)).collect();
    run(rec, n_max, &indices, Pruning::DivisionIndex { n0 }, policy)
}

/// Families where a prime term forces `n = p^m`: `2^n + 1` with `p = 2`, and
/// `(b^{pn} - 1)/(b^n - 1)`.
pub fn prime_power_census(rec: &LinearRecurrence, n_max: u64, policy: &CensusPolicy) -> Result<CensusReport> {
    let p = match rec.family() {
        Family::GeometricShift { a, b } if *a == 1 && *b == 1 => 2,
        Family::RepunitRatio { p, .. } => *p as u64,
        _ => return Err(Error::Domain(format!("{rec} has no prime-power index restriction"))),
    };
    let mut indices = Vec::new();
    let mut q = 1u64;
    while q <= n_max {
        indices.push(q);
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    run(rec, n_max, &indices, Pruning::PrimePower { p }, policy)
}

/// The given indices only (sorted and deduplicated first).
pub fn census_at(rec: &LinearRecurrence, indices: &[u64], policy: &CensusPolicy) -> Result<CensusReport> {
    let mut idx: Vec<u64> = indices.iter().copied().filter(|&n| n >= 1).collect();
    idx.sort_unstable();
    idx.dedup();
    let n_max = idx.last().copied().unwrap_or(0);
    run(rec, n_max, &idx, Pruning::Indices, policy)
}

/// Indices `n <= N` where both sequences take (probable) prime values.
pub fn simultaneous_census(
    rec1: &LinearRecurrence,
    rec2: &LinearRecurrence,
    n_max: u64,
    policy: &CensusPolicy,
) -> Result<Vec<u64>> {
    if rec1 == rec2 {
        return Err(Error::Domain("simultaneous census needs two distinct sequences".into()));
    }
    let inner = CensusPolicy { log: None, ..policy.clone() };
    let first = census(rec1, n_max, &inner)?;
    let second = census_at(rec2, &first.indices(), &inner)?;
    Ok(second.indices())
}

/// `kp + 1` trial divisors that the family structure guarantees.
fn kp_rule(rec: &LinearRecurrence, n: u64, k_max: u64) -> Option<KpOne> {
    if k_max == 0 {
        return None;
    }
    match rec.family() {
        // q | 2^n - 1 with n prime: q = 2kn + 1 = +-1 (mod 8)
        Family::GeometricShift { a, b } if *a == 1 && *b == -1 && n > 2 && is_prime_u64(n) => {
            Some(KpOne { p: n, k_max: 2 * k_max, mod8: true })
        }
        // q | 2^(2^m) + 1 with m >= 2: q = 1 (mod 2^(m+2))
        Family::GeometricShift { a, b } if *a == 1 && *b == 1 && n >= 4 && n.is_power_of_two() => {
            n.checked_mul(4).map(|p| KpOne { p, k_max, mod8: false })
        }
        _ => None,
    }
}

struct Outcome {
    n: u64,
    verdict: Verdict,
    method: Method,
    digits: u64,
}

fn examine(rec: &LinearRecurrence, n: u64, term: &Integer, sieve_div: u64, policy: &CensusPolicy) -> Outcome {
    let done = |verdict, method, digits| Outcome { n, verdict, method, digits };
    let value = if policy.count_negative { Integer::from(term.abs_ref()) } else { term.clone() };
    if value <= 1 {
        return done(Verdict::Composite(Evidence::NotAboveOne), Method::Size, 0);
    }
    if let Some(w) = value.to_u64() {
        let v = is_probable_prime(&value, &policy.prp);
        return done(v, Method::Deterministic, w.to_string().len() as u64);
    }
    // value >= 2^64 exceeds every sieving prime, so a mark proves compositeness
    if sieve_div != 0 {
        return done(Verdict::Composite(Evidence::Factor(Integer::from(sieve_div))), Method::Sieve, 0);
    }
    if let Some(kp) = kp_rule(rec, n, policy.kp_k_max) {
        let cfg = TrialConfig { plain_bound: 0, kp_one: Some(kp) };
        if let Some(f) = trial_division(&value, &cfg) {
            return done(Verdict::Composite(Evidence::Factor(f.factor)), Method::Trial, 0);
        }
    }
    let v = is_probable_prime(&value, &policy.prp);
    let digits = if v.is_prime() { value.to_string().len() as u64 } else { 0 };
    done(v, Method::Prp, digits)
}

fn run(rec: &LinearRecurrence, n_max: u64, indices: &[u64], pruning: Pruning, policy: &CensusPolicy) -> Result<CensusReport> {
    match policy.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
            pool.install(|| run_inner(rec, n_max, indices, pruning, policy))
        }
        None => run_inner(rec, n_max, indices, pruning, policy),
    }
}

fn run_inner(rec: &LinearRecurrence, n_max: u64, indices: &[u64], pruning: Pruning, policy: &CensusPolicy) -> Result<CensusReport> {
    let start = Instant::now();
    let key = log_key(&format!("{rec}|abs={}", policy.count_negative));
    let mut known: BTreeMap<u64, Logged> = match &policy.log {
        Some(path) => replay(path, key)?,
        None => BTreeMap::new(),
    };
    let mut writer = match &policy.log {
        Some(path) => Some(LogWriter::open(path, key)?),
        None => None,
    };
    let max_index = indices.last().copied().unwrap_or(0);
    let fresh: Vec<u64> = indices.iter().copied().filter(|n| !known.contains_key(n)).collect();
    let marks = sieve::smallest_divisors(rec, &fresh, policy.sieve_bound_for(max_index));
    let mark_of: BTreeMap<u64, u64> = fresh.iter().copied().zip(marks).collect();

    let dense = sieve::is_dense(&fresh);
    let mut stream = rec.terms().enumerate();
    for chunk in fresh.chunks(CHUNK) {
        let work: Vec<(u64, Option<Integer>)> = if dense {
            let mut out = Vec::with_capacity(chunk.len());
            for &n in chunk {
                let term = loop {
                    let (i, t) = stream.next().unwrap();
                    if i as u64 == n {
                        break t;
                    }
                };
                out.push((n, Some(term)));
            }
            out
        } else {
            chunk.iter().map(|&n| (n, None)).collect()
        };
        let outcomes: Vec<Outcome> = work
            .par_chunks(BLOCK)
            .map(|block| {
                block
                    .iter()
                    .map(|(n, term)| {
                        let owned;
                        let t = match term {
                            Some(t) => t,
                            None => {
                                owned = rec.term(*n);
                                &owned
                            }
                        };
                        examine(rec, *n, t, mark_of[n], policy)
                    })
                    .collect::<Vec<_>>()
            })
            .flatten()
            .collect();
        for o in outcomes {
            ::log::trace!("census {rec}: n = {} {} by {}", o.n, o.verdict.label(), o.method.label());
            let logged = if o.verdict.is_prime() {
                Logged::Prime { verdict: o.verdict.clone(), digits: o.digits }
            } else {
                Logged::Composite
            };
            if let Some(w) = writer.as_mut() {
                w.append(o.n, &logged)?;
            }
            known.insert(o.n, logged);
        }
        if let Some(w) = writer.as_mut() {
            w.flush()?;
        }
        ::log::info!("census {rec}: through n = {}, {} verdicts", chunk.last().unwrap(), known.len());
    }

    let hits: Vec<Hit> = indices
        .iter()
        .filter_map(|n| match &known[n] {
            Logged::Prime { verdict, digits } => Some(Hit {
                n: *n,
                digits: *digits,
                verdict: verdict.clone(),
                method: if matches!(verdict, Verdict::ProvenPrime(_)) { Method::Deterministic } else { Method::Prp },
            }),
            Logged::Composite => None,
        })
        .collect();
    let mut checkpoints = Vec::new();
    let mut t = 100u64;
    while t <= n_max {
        checkpoints.push(Checkpoint { n: t, count: hits.partition_point(|h| h.n <= t) });
        match t.checked_mul(10) {
            Some(x) => t = x,
            None => break,
        }
    }
    Ok(CensusReport {
        spec: rec.clone(),
        n_max,
        pruning,
        hits,
        checkpoints,
        policy: policy.fingerprint(max_index),
        tested: indices.len() as u64,
        wall_seconds: start.elapsed().as_secs_f64(),
        partial: false,
    })
}
