use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arith::{factor_u64, gcd_u64};

/// Forbidden residues grouped by modulus; every modulus divides `window`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSet {
    pub window: u64,
    /// `m -> sorted residues r` such that `n = r (mod m)` is forbidden.
    pub by_modulus: BTreeMap<u64, Vec<u64>>,
}

impl ClassSet {
    pub fn new(window: u64) -> Self {
        ClassSet { window, by_modulus: BTreeMap::new() }
    }

    pub fn forbid(&mut self, m: u64, residues: &[u64]) {
        assert!(m >= 1 && self.window % m == 0, "modulus {m} does not divide {}", self.window);
        if residues.is_empty() {
            return;
        }
        let e = self.by_modulus.entry(m).or_default();
        e.extend(residues.iter().map(|r| r % m));
        e.sort_unstable();
        e.dedup();
    }

    fn allowed(&self, n: u64) -> bool {
        self.by_modulus.iter().all(|(m, rs)| rs.binary_search(&(n % m)).is_err())
    }

    /// Direct scan over `[0, window)`; only for tiny windows and tests.
    pub fn count_naive(&self) -> u64 {
        (0..self.window).filter(|&n| self.allowed(n)).count() as u64
    }
}

const SEGMENT_BITS: u64 = 1 << 22;

/// Segmented bit-sieve over the whole window, segments processed in parallel.
pub fn count_sieve(set: &ClassSet) -> u64 {
    if set.by_modulus.contains_key(&1) {
        return 0;
    }
    let classes: Vec<(u64, u64)> = set
        .by_modulus
        .iter()
        .flat_map(|(&m, rs)| rs.iter().map(move |&r| (m, r)))
        .collect();
    let segments = set.window.div_ceil(SEGMENT_BITS);
    (0..segments)
        .into_par_iter()
        .map(|s| {
            let lo = s * SEGMENT_BITS;
            let len = SEGMENT_BITS.min(set.window - lo);
            let mut bits = vec![0u64; len.div_ceil(64) as usize];
            for &(m, r) in &classes {
                // first n >= lo with n = r (mod m)
                let mut i = (r + m - lo % m) % m;
                while i < len {
                    bits[(i / 64) as usize] |= 1 << (i % 64);
                    i += m;
                }
            }
            let marked: u64 = bits.iter().map(|w| w.count_ones() as u64).sum();
            len - marked
        })
        .sum()
}

/// Inclusion-exclusion: at most one residue per modulus, CRT-compatible choices only.
pub fn count_inclusion_exclusion(set: &ClassSet) -> u64 {
    let mods: Vec<(u64, &Vec<u64>)> = set.by_modulus.iter().map(|(&m, r)| (m, r)).collect();
    // signed sum of window / lcm over compatible selections
    fn rec(mods: &[(u64, &Vec<u64>)], i: usize, modulus: u64, residue: u64, sign: i64, window: u64) -> i128 {
        if i == mods.len() {
            return sign as i128 * (window / modulus) as i128;
        }
        let mut total = rec(mods, i + 1, modulus, residue, sign, window);
        let (m, rs) = mods[i];
        for &r in rs.iter() {
            if let Some((mm, rr)) = crt(residue, modulus, r, m) {
                total += rec(mods, i + 1, mm, rr, -sign, window);
            }
        }
        total
    }
    let total = rec(&mods, 0, 1, 0, 1, set.window);
    u64::try_from(total).expect("inclusion-exclusion count is non-negative")
}

/// Solves `x = a (mod m), x = b (mod n)`; `None` if incompatible.
pub(crate) fn crt(a: u64, m: u64, b: u64, n: u64) -> Option<(u64, u64)> {
    let g = gcd_u64(m, n);
    if a % g != b % g {
        return None;
    }
    let l = m / g * n;
    // x = a + m * t with m t = b - a (mod n)
    let (m_g, n_g) = ((m / g) as i128, (n / g) as i128);
    let diff = ((b as i128 - a as i128) / g as i128).rem_euclid(n_g);
    let inv = mod_inverse(m_g.rem_euclid(n_g), n_g);
    let t = (diff * inv).rem_euclid(n_g);
    let x = (a as i128 + m as i128 * t).rem_euclid(l as i128);
    Some((l, x as u64))
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}

/// Splits off every prime `q` whose only moduli are powers of `q`: those constraints
/// are independent of the rest by CRT, so the count factorises.
pub fn count_reduced(set: &ClassSet) -> u64 {
    if set.by_modulus.contains_key(&1) {
        return 0;
    }
    let mut rest = set.clone();
    let mut factor = 1u64;
    for (q, e) in factor_u64(set.window) {
        let moduli: Vec<u64> = rest.by_modulus.keys().copied().filter(|m| m % q == 0).collect();
        let isolated = moduli.iter().all(|&m| is_power_of(m, q));
        if !isolated {
            continue;
        }
        let qe = q.pow(e);
        let mut local = ClassSet::new(qe);
        for m in moduli {
            let rs = rest.by_modulus.remove(&m).unwrap();
            local.forbid(m, &rs);
        }
        factor *= local.count_naive();
        rest.window /= qe;
    }
    if factor == 0 {
        return 0;
    }
    factor * count_sieve(&rest)
}

fn is_power_of(mut m: u64, q: u64) -> bool {
    while m % q == 0 {
        m /= q;
    }
    m == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ClassSet {
        let mut s = ClassSet::new(720720);
        s.forbid(4, &[1]);
        s.forbid(3, &[2]);
        s.forbid(10, &[3, 7]);
        s.forbid(13, &[5]);
        s.forbid(11, &[0, 4]);
        s.forbid(12, &[6]);
        s.forbid(16, &[0]);
        s
    }

    #[test]
    fn three_strategies_agree() {
        let s = sample();
        let naive = s.count_naive();
        assert_eq!(count_sieve(&s), naive);
        assert_eq!(count_inclusion_exclusion(&s), naive);
        assert_eq!(count_reduced(&s), naive);
    }

    #[test]
    fn crt_small() {
        assert_eq!(crt(1, 4, 2, 3), Some((12, 5)));
        assert_eq!(crt(1, 4, 2, 6), None);
        assert_eq!(crt(3, 4, 1, 6), Some((12, 7)));
    }

    #[test]
    fn everything_forbidden() {
        let mut s = ClassSet::new(60);
        s.forbid(1, &[0]);
        assert_eq!(count_sieve(&s), 0);
        assert_eq!(count_reduced(&s), 0);
        assert_eq!(count_inclusion_exclusion(&s), 0);
    }
}
