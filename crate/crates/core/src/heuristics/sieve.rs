use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::arith::{lcm_u64, primes_up_to};
use crate::bigseq::LinearRecurrence;
use crate::density::classes::crt;
use crate::moddyn::{forbidden_classes, period_support, ForbiddenClasses};
use crate::{Error, Result};

/// Both sides of the base-2 sieve identity at one `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveIdentity {
    pub y: u64,
    /// Odd primes of `2^m - 1` with `m <= y`.
    pub primes: Vec<u64>,
    /// `sum_{d | R_y odd} mu(d) / ord_d(2)`.
    pub lhs: Rational,
    /// `prod_{p <= y} (1 - 1/p)`.
    pub rhs: Rational,
}

impl SieveIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn sieve_identity_check(y: u64) -> Result<SieveIdentity> {
    if !(2..=12).contains(&y) {
        return Err(Error::Domain(format!("sieve identity is checked for 2 <= y <= 12, got {y}")));
    }
    let mersenne = LinearRecurrence::mersenne();
    let primes: Vec<u64> = period_support(&mersenne, y)?.primes().into_iter().filter(|&p| p > 2).collect();
    // every d | 2^n - 1 for n = ord_d(2), so each eta_d is 1
    let lhs = eta_sum_over(&mersenne, &primes)?;
    let rhs = primes_up_to(y)
        .into_iter()
        .fold(Rational::from(1), |acc, p| acc * Rational::from((p - 1, p)));
    Ok(SieveIdentity { y, primes, lhs, rhs })
}

/// `sum_{d | R_y, d odd} mu(d) eta_d / ord_d`, over the odd support primes of `rec` up to `y`.
pub fn eta_sum(rec: &LinearRecurrence, y: u64) -> Result<Rational> {
    let primes: Vec<u64> = period_support(rec, y)?.primes().into_iter().filter(|&p| p > 2).collect();
    eta_sum_over(rec, &primes)
}

/// The same sum restricted to the squarefree `d` built from `primes`.
///
/// Each term is `mu(d)` times the density of `n` (past every preperiod) with `d | u_n`.
/// When each prime has one forbidden class, as for `a 2^n + b`, that density is
/// `eta_d / ord_d`.
pub fn eta_sum_over(rec: &LinearRecurrence, primes: &[u64]) -> Result<Rational> {
    if primes.len() > 24 {
        return Err(Error::Domain(format!("{} primes give too many divisors", primes.len())));
    }
    let classes: Vec<ForbiddenClasses> = primes.iter().map(|&p| forbidden_classes(rec, p)).collect();
    let mut total = Rational::new();
    // (modulus, residues of n mod modulus with d | u_n)
    fn walk(classes: &[ForbiddenClasses], i: usize, sign: i32, m: u64, res: &[u64], total: &mut Rational) {
        if i == classes.len() {
            *total += Rational::from((sign * res.len() as i32, m));
            return;
        }
        walk(classes, i + 1, sign, m, res, total);
        let c = &classes[i];
        if res.is_empty() || c.residues.is_empty() {
            return;
        }
        let mut next = Vec::new();
        let l = lcm_u64(m, c.period);
        for &a in res {
            for &b in &c.residues {
                if let Some((_, x)) = crt(a, m, b, c.period) {
                    next.push(x);
                }
            }
        }
        next.sort_unstable();
        walk(classes, i + 1, -sign, l, &next, total);
    }
    walk(&classes, 0, 1, 1, &[0], &mut total);
    Ok(total)
}
