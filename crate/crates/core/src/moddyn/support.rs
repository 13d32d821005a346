use std::collections::BTreeMap;

use rug::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::period::{period_mod, ModStepper};
use crate::arith::{factor_u64, lcm_u64, primes_up_to, FactorCache, FactorEffort};
use crate::bigseq::{Family, LinearRecurrence};
use crate::{Error, Result};

/// Residues of `n` modulo the period of `u mod p` at which `p | u_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForbiddenClasses {
    pub prime: u64,
    pub period: u64,
    pub preperiod: u64,
    /// `S_p`, sorted; describes every `n >= preperiod`.
    pub residues: Vec<u64>,
    /// `(n, p | u_n)` for `n < preperiod`.
    pub exceptions: Vec<(u64, bool)>,
}

impl ForbiddenClasses {
    /// Whether `p | u_n`.
    pub fn divides(&self, n: u64) -> bool {
        if n < self.preperiod {
            return self.exceptions[n as usize].1;
        }
        self.residues.binary_search(&(n % self.period)).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}

/// `S_p` from one pass over preperiod and period.
pub fn forbidden_classes(rec: &LinearRecurrence, p: u64) -> ForbiddenClasses {
    let r = period_mod(rec, p);
    let mut st = ModStepper::new(rec, p);
    let mut exceptions = Vec::with_capacity(r.preperiod as usize);
    for n in 0..r.preperiod {
        exceptions.push((n, st.next().unwrap() == 0));
    }
    let mut residues = Vec::new();
    for n in r.preperiod..r.preperiod + r.period {
        if st.next().unwrap() == 0 {
            residues.push(n % r.period);
        }
    }
    residues.sort_unstable();
    ForbiddenClasses { prime: p, period: r.period, preperiod: r.preperiod, residues, exceptions }
}

/// Primes of period at most `y`, grouped by exact period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodTable {
    pub y: u64,
    /// `m -> primes with exact period m` (the factors of `r_m`).
    pub groups: BTreeMap<u64, Vec<u64>>,
    /// `lcm[1..=y]`.
    pub l_y: u64,
}

impl PeriodTable {
    /// The primes of `R_y`, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.groups.values().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// `R_y` as an integer.
    pub fn r_y(&self) -> Integer {
        self.primes().iter().fold(Integer::from(1), |acc, &p| acc * p)
    }

    /// Largest preperiod among the support primes.
    pub fn max_preperiod(&self, rec: &LinearRecurrence) -> u64 {
        self.primes().iter().map(|&p| period_mod(rec, p).preperiod).max().unwrap_or(0)
    }
}

impl Serialize for PeriodTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Group<'a> {
            m: u64,
            primes: &'a [u64],
        }
        let groups: Vec<Group> = self.groups.iter().map(|(&m, p)| Group { m, primes: p }).collect();
        let mut st = s.serialize_struct("PeriodTable", 3)?;
        st.serialize_field("y", &self.y)?;
        st.serialize_field("Ly", &self.l_y)?;
        st.serialize_field("groups", &groups)?;
        st.end()
    }
}

/// `lcm[1..=y]`; `None` on overflow.
pub fn lcm_up_to(y: u64) -> Option<u64> {
    let mut l = 1u64;
    for m in 2..=y {
        let g = crate::arith::gcd_u64(l, m);
        l = l.checked_mul(m / g)?;
    }
    Some(l)
}

/// Knobs for [`period_support_with`].
pub struct SupportConfig<'a> {
    /// Direct scan bound used when a gcd window degenerates to 0.
    pub scan_bound: u64,
    pub effort: FactorEffort,
    pub cache: Option<&'a FactorCache>,
}

impl Default for SupportConfig<'_> {
    fn default() -> Self {
        SupportConfig { scan_bound: 1_000_000, effort: FactorEffort::default(), cache: None }
    }
}

pub fn period_support(rec: &LinearRecurrence, y: u64) -> Result<PeriodTable> {
    period_support_with(rec, y, &SupportConfig::default())
}

/// All primes whose period for `rec` is at most `y`, each verified by [`period_mod`].
pub fn period_support_with(rec: &LinearRecurrence, y: u64, cfg: &SupportConfig) -> Result<PeriodTable> {
    if y == 0 {
        return Err(Error::Domain("support bound y must be >= 1".into()));
    }
    let l_y = lcm_up_to(y).ok_or_else(|| Error::Domain(format!("lcm[1..{y}] overflows 64 bits")))?;
    let mut candidates: Vec<u64> = Vec::new();
    let base2 = matches!(rec.family(), Family::GeometricShift { .. });
    if base2 {
        // candidates are the prime factors of 2^m - 1, plus 2
        candidates.push(2);
        for m in 1..=y {
            let f = factor_mersenne(m, cfg)?;
            candidates.extend(f);
        }
    } else {
        let k = rec.order() as u64;
        let offset = k + 1;
        let window: Vec<Integer> = rec.terms().take((offset + y + 2 * k) as usize).collect();
        for m in 1..=y {
            let mut g = Integer::new();
            for i in 0..2 * k {
                let a = &window[(offset + m + i) as usize];
                let b = &window[(offset + i) as usize];
                g.gcd_mut(&Integer::from(a - b));
            }
            if g == 0 {
                // the sequence is periodic: scan small primes directly
                for p in primes_up_to(cfg.scan_bound) {
                    candidates.push(p);
                }
                continue;
            }
            candidates.extend(factor_candidates(&g, m, cfg)?);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    let mut groups: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for p in candidates {
        let r = period_mod(rec, p);
        if r.period <= y {
            groups.entry(r.period).or_default().push(p);
        }
    }
    debug_assert!(groups.keys().all(|m| l_y % m == 0));
    Ok(PeriodTable { y, groups, l_y })
}

fn factor_mersenne(m: u64, cfg: &SupportConfig) -> Result<Vec<u64>> {
    if m < 64 {
        return Ok(factor_u64((1u64 << m) - 1).into_iter().map(|(p, _)| p).collect());
    }
    let n = (Integer::from(1) << m as u32) - 1u32;
    factor_candidates(&n, m, cfg)
}

fn factor_candidates(g: &Integer, m: u64, cfg: &SupportConfig) -> Result<Vec<u64>> {
    let abs = Integer::from(g.abs_ref());
    let f = match cfg.cache {
        Some(c) => c.factorize(&abs, &cfg.effort)?,
        None => crate::arith::factorize(&abs, &cfg.effort),
    };
    if let Some(c) = f.cofactor() {
        return Err(Error::IncompleteSupport { period: m, cofactor: c.clone() });
    }
    f.factors()
        .iter()
        .map(|(p, _)| {
            p.to_u64().ok_or_else(|| {
                Error::Domain(format!("support prime {p} of period {m} exceeds 64 bits"))
            })
        })
        .collect()
}

/// Brute-force: every prime `p <= bound` whose period is at most `y`.
pub fn support_by_scan(rec: &LinearRecurrence, y: u64, bound: u64) -> Vec<u64> {
    primes_up_to(bound)
        .into_iter()
        .filter(|&p| period_mod(rec, p).period <= y)
        .collect()
}

/// `lcm` of the periods in a table, which divides `L_y`.
pub fn period_lcm(table: &PeriodTable) -> u64 {
    table.groups.keys().fold(1, |a, &m| lcm_u64(a, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forbidden_examples() {
        let g = LinearRecurrence::geometric_shift(1, 3).unwrap();
        let f5 = forbidden_classes(&g, 5);
        assert_eq!((f5.period, f5.residues.clone()), (4, vec![1]));
        let f3 = forbidden_classes(&g, 3);
        assert_eq!((f3.period, f3.is_empty()), (2, true));
        let h = LinearRecurrence::geometric_shift(1, -7).unwrap();
        let f = forbidden_classes(&h, 5);
        assert_eq!((f.period, f.residues), (4, vec![1]));
    }

    #[test]
    fn base_two_support() {
        let g = LinearRecurrence::geometric_shift(1, 3).unwrap();
        let t = period_support(&g, 5).unwrap();
        assert_eq!(t.primes(), [2, 3, 5, 7, 31]);
        assert_eq!(t.l_y, 60);
        let t10 = period_support(&g, 10).unwrap();
        assert_eq!(t10.groups[&10], [11]);
        assert!(!t10.primes().contains(&41));
    }

    #[test]
    fn fibonacci_support() {
        let t = period_support(&LinearRecurrence::fibonacci(), 3).unwrap();
        assert_eq!(t.primes(), [2]);
        assert_eq!(t.groups[&3], [2]);
    }

    #[test]
    fn json_shape() {
        let g = LinearRecurrence::geometric_shift(1, 3).unwrap();
        let t = period_support(&g, 4).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["Ly"], 12);
        assert_eq!(v["groups"][0]["m"], 1);
    }

    #[test]
    fn lcm_values() {
        assert_eq!(lcm_up_to(5), Some(60));
        assert_eq!(lcm_up_to(20), Some(232792560));
        assert_eq!(lcm_up_to(25), Some(26771144400));
    }
}
