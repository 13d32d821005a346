//! Covering systems of congruences that force every term of a sequence to
//! share a factor with a fixed modulus.

mod erdos;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::bigseq::LinearRecurrence;
use crate::moddyn::{forbidden_classes, ForbiddenClasses};
use crate::{Error, Result};

pub use erdos::{erdos_check, erdos_construction, erdos_gcd_scan, erdos_residue, ErdosConstruction};

/// Windows longer than this are rejected rather than scanned.
const MAX_WINDOW: u64 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub residue: u64,
    pub modulus: u64,
    /// The prime dividing `u_n` on this class, when the system belongs to a sequence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringSystem {
    pub congruences: Vec<Congruence>,
    #[serde(default)]
    pub note: String,
}

/// Result of a coverage scan over `[0, window)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub covers: bool,
    pub window: u64,
    pub first_uncovered: Option<u64>,
}

/// A class on which the named prime fails to divide the sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityFailure {
    pub residue: u64,
    pub modulus: u64,
    pub prime: u64,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceCovering {
    pub coverage: Coverage,
    /// Divisibility was checked for `0 <= n < preperiod + window`.
    pub window: u64,
    pub preperiod: u64,
    pub divisibility_failures: Vec<DivisibilityFailure>,
}

impl SequenceCovering {
    pub fn holds(&self) -> bool {
        self.coverage.covers && self.divisibility_failures.is_empty()
    }
}

impl CoveringSystem {
    pub fn new(congruences: Vec<Congruence>) -> Self {
        CoveringSystem { congruences, note: String::new() }
    }

    /// From `(residue, modulus)` pairs without primes.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Self {
        Self::new(pairs.iter().map(|&(residue, modulus)| Congruence { residue, modulus, prime: None }).collect())
    }

    /// One congruence per forbidden class of each prime, read off one period of `rec mod p`.
    /// Primes that never divide a term contribute nothing.
    pub fn from_primes(rec: &LinearRecurrence, primes: &[u64]) -> Result<Self> {
        let mut congruences = Vec::new();
        for &p in primes {
            let fc = forbidden_classes(rec, p);
            if fc.preperiod > 0 && fc.exceptions.iter().any(|&(_, d)| d) {
                return Err(Error::InvalidCovering(format!("{p} divides {rec} only inside its preperiod")));
            }
            congruences.extend(fc.residues.iter().map(|&r| Congruence { residue: r, modulus: fc.period, prime: Some(p) }));
        }
        Ok(CoveringSystem { congruences, note: String::new() })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn validate(&self) -> Result<()> {
        if self.congruences.is_empty() {
            return Err(Error::InvalidCovering("empty system".into()));
        }
        if let Some(c) = self.congruences.iter().find(|c| c.modulus == 0) {
            return Err(Error::InvalidCovering(format!("zero modulus at residue {}", c.residue)));
        }
        Ok(())
    }

    /// `lcm` of the moduli.
    pub fn window(&self) -> Result<u64> {
        self.validate()?;
        let mut w = 1u64;
        for c in &self.congruences {
            w = checked_lcm(w, c.modulus)?;
        }
        Ok(w)
    }

    /// Product of the distinct primes.
    pub fn prime_product(&self) -> Integer {
        let mut ps: Vec<u64> = self.congruences.iter().filter_map(|c| c.prime).collect();
        ps.sort_unstable();
        ps.dedup();
        ps.iter().fold(Integer::from(1), |a, &p| a * p)
    }
}

fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    let l = (a as u128 / crate::arith::gcd_u64(a, b) as u128) * b as u128;
    if l > MAX_WINDOW as u128 {
        return Err(Error::InvalidCovering(format!("window lcm({a}, {b}) exceeds {MAX_WINDOW}")));
    }
    Ok(l as u64)
}

/// Exact coverage check over one full window.
pub fn verify_covers(sys: &CoveringSystem) -> Result<Coverage> {
    let window = sys.window()?;
    let mut covered = vec![false; window as usize];
    for c in &sys.congruences {
        let mut n = c.residue % c.modulus;
        while n < window {
            covered[n as usize] = true;
            n += c.modulus;
        }
    }
    let first_uncovered = covered.iter().position(|&x| !x).map(|i| i as u64);
    Ok(Coverage { covers: first_uncovered.is_none(), window, first_uncovered })
}

pub fn verify_sequence_covering(rec: &LinearRecurrence, sys: &CoveringSystem) -> Result<SequenceCovering> {
    verify_sequence_covering_scaled(rec, sys, 1)
}

/// As [`verify_sequence_covering`], with the divisibility window stretched `scale` times.
pub fn verify_sequence_covering_scaled(rec: &LinearRecurrence, sys: &CoveringSystem, scale: u64) -> Result<SequenceCovering> {
    let coverage = verify_covers(sys)?;
    let mut window = coverage.window;
    let mut classes: Vec<(&Congruence, u64, ForbiddenClasses)> = Vec::new();
    for c in &sys.congruences {
        let p = c.prime.ok_or_else(|| {
            Error::InvalidCovering(format!("class {} mod {} carries no prime", c.residue, c.modulus))
        })?;
        let fc = forbidden_classes(rec, p);
        window = checked_lcm(window, fc.period)?;
        classes.push((c, p, fc));
    }
    let preperiod = classes.iter().map(|(_, _, fc)| fc.preperiod).max().unwrap_or(0);
    let span = window.checked_mul(scale).filter(|&s| s <= MAX_WINDOW).ok_or_else(|| {
        Error::InvalidCovering(format!("window {window} x {scale} too long"))
    })?;
    let mut divisibility_failures = Vec::new();
    for (c, p, fc) in &classes {
        let mut n = c.residue % c.modulus;
        while n < preperiod + span {
            if !fc.divides(n) {
                divisibility_failures.push(DivisibilityFailure { residue: c.residue, modulus: c.modulus, prime: *p, n });
                break;
            }
            n += c.modulus;
        }
    }
    Ok(SequenceCovering { coverage, window: span, preperiod, divisibility_failures })
}

/// Direct check of `gcd(u_n, prod p) > 1` for `0 <= n < preperiod + window`, by stepping
/// every prime's residues; independent of the congruence bookkeeping.
pub fn always_shares_factor(rec: &LinearRecurrence, primes: &[u64]) -> Result<bool> {
    let classes: Vec<ForbiddenClasses> = primes.iter().map(|&p| forbidden_classes(rec, p)).collect();
    let window = classes.iter().try_fold(1u64, |w, fc| checked_lcm(w, fc.period))?;
    let pre = classes.iter().map(|fc| fc.preperiod).max().unwrap_or(0);
    Ok((0..pre + window).all(|n| classes.iter().any(|fc| fc.divides(n))))
}

/// A named system: a sequence, its prime set, and the congruences derived from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCovering {
    pub name: String,
    pub sequence: LinearRecurrence,
    pub primes: Vec<u64>,
    pub system: CoveringSystem,
    /// Listed primes that divide no term.
    pub idle_primes: Vec<u64>,
}

#[derive(Deserialize)]
struct PrimeSetFixture {
    name: String,
    sequence: String,
    primes: Vec<u64>,
    #[serde(default)]
    note: String,
}

/// Loads `{name, sequence, primes, note}`, computing the residues.
pub fn load_prime_set(text: &str) -> Result<NamedCovering> {
    let f: PrimeSetFixture = serde_json::from_str(text)?;
    let sequence: LinearRecurrence = f.sequence.parse()?;
    let mut system = CoveringSystem::from_primes(&sequence, &f.primes)?;
    system.note = f.note;
    let idle_primes = f.primes.iter().copied().filter(|&p| system.congruences.iter().all(|c| c.prime != Some(p))).collect();
    Ok(NamedCovering { name: f.name, sequence, primes: f.primes, system, idle_primes })
}

/// The shipped prime-set fixtures.
pub fn named_coverings() -> Result<Vec<NamedCovering>> {
    [
        include_str!("../../fixtures/coverings/selfridge.json"),
        include_str!("../../fixtures/coverings/riesel.json"),
        include_str!("../../fixtures/coverings/brier_plus.json"),
        include_str!("../../fixtures/coverings/brier_minus.json"),
        include_str!("../../fixtures/coverings/fibonacci_93687.json"),
        include_str!("../../fixtures/coverings/fibonacci_103377.json"),
    ]
    .iter()
    .map(|t| load_prime_set(t))
    .collect()
}

pub fn named_covering(name: &str) -> Result<NamedCovering> {
    named_coverings()?
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::InvalidCovering(format!("no shipped system named `{name}`")))
}

/// The seven-class system behind the Erdos construction.
pub fn erdos_system() -> CoveringSystem {
    CoveringSystem::from_json(include_str!("../../fixtures/coverings/erdos.json")).expect("shipped fixture parses")
}

pub const BRIER_K: &str = "3316923598096294713661";

/// Both Brier conditions, `2^n + k` and `2^n - k`.
pub fn brier_check() -> Result<(bool, bool)> {
    let plus = named_covering("brier-plus")?;
    let minus = named_covering("brier-minus")?;
    Ok((
        verify_sequence_covering(&plus.sequence, &plus.system)?.holds(),
        verify_sequence_covering(&minus.sequence, &minus.system)?.holds(),
    ))
}

/// `M = 2*3*7*17*19*23`.
pub const FIBONACCI_COVERING_MODULUS: u64 = 312_018;

/// `a*F_n + b` as an order-3 recurrence.
pub fn scaled_fibonacci(a: i64, b: i64) -> Result<LinearRecurrence> {
    // (T - 1)(T^2 - T - 1) = T^3 - 2T^2 + 1
    LinearRecurrence::from_i64(&[2, 0, -1], &[b, a + b, a + b])
}

/// `gcd(a*F_n + b, M) > 1` for every `n` in one Pisano period of `M`.
pub fn fibonacci_covering_check(a: i64, b: i64) -> bool {
    let m = FIBONACCI_COVERING_MODULUS as i128;
    let (a, b) = ((a as i128).rem_euclid(m), (b as i128).rem_euclid(m));
    let (mut f0, mut f1) = (0i128, 1i128);
    loop {
        let v = ((a * f0 + b) % m) as u64;
        if crate::arith::gcd_u64(v, FIBONACCI_COVERING_MODULUS) == 1 {
            return false;
        }
        (f0, f1) = (f1, (f0 + f1) % m);
        if (f0, f1) == (0, 1) {
            return true;
        }
    }
}
