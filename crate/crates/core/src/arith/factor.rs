use rug::ops::Pow;
use rug::Integer;
use serde::{Deserialize, Serialize};

use super::ecm::ecm;
use super::functions::{factor_u64, primes_up_to};
use super::prp::{is_probable_prime, PrpPolicy};
use super::rho::{brent, RhoOutcome};

/// How hard `factorize` tries before flagging a cofactor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEffort {
    pub trial_bound: u64,
    /// Total Pollard rho iterations per composite.
    pub rho_iterations: u64,
    /// `(B1, curves)` stages of the elliptic curve method, tried in order.
    pub ecm_stages: Vec<(u64, u32)>,
    pub seed: u64,
}

impl Default for FactorEffort {
    fn default() -> Self {
        FactorEffort {
            trial_bound: 1_000_000,
            rho_iterations: 1 << 26,
            ecm_stages: vec![(2_000, 25), (11_000, 90), (50_000, 300)],
            seed: 0xfac7,
        }
    }
}

impl FactorEffort {
    /// Trial division and rho only.
    pub fn light() -> Self {
        FactorEffort { rho_iterations: 1 << 20, ecm_stages: Vec::new(), ..Self::default() }
    }
}

/// `|n| = prod p^e * cofactor`, with the sign kept apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationResult {
    negative: bool,
    factors: Vec<(Integer, u32)>,
    cofactor: Option<Integer>,
}

impl FactorizationResult {
    pub fn from_parts(negative: bool, mut primes: Vec<Integer>, cofactor: Option<Integer>) -> Self {
        primes.sort();
        let mut factors: Vec<(Integer, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        FactorizationResult { negative, factors, cofactor }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// Prime factors with exponents, ascending.
    pub fn factors(&self) -> &[(Integer, u32)] {
        &self.factors
    }

    /// Composite part that resisted the effort budget.
    pub fn cofactor(&self) -> Option<&Integer> {
        self.cofactor.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    /// Prime factors with multiplicity, ascending.
    pub fn primes(&self) -> Vec<Integer> {
        self.factors
            .iter()
            .flat_map(|(p, e)| std::iter::repeat_n(p.clone(), *e as usize))
            .collect()
    }

    /// `prod p^e * cofactor`, i.e. `|n|`.
    pub fn product(&self) -> Integer {
        let mut acc = self.cofactor.clone().unwrap_or_else(|| Integer::from(1));
        for (p, e) in &self.factors {
            acc *= Integer::from(p.pow(*e));
        }
        acc
    }
}

fn is_prime(n: &Integer) -> bool {
    is_probable_prime(n, &PrpPolicy::default()).is_prime()
}

/// Splits composite `n`, or returns `None` if the budget runs out.
fn split(n: &Integer, effort: &FactorEffort, attempt: u64) -> Option<Integer> {
    let first = effort.rho_iterations.min(1 << 16);
    let mut c = 1 + 7 * attempt;
    match brent(n, first, c) {
        RhoOutcome::Factor(f) => return Some(f),
        RhoOutcome::Exhausted { .. } => c += 1000,
    }
    for (i, &(b1, curves)) in effort.ecm_stages.iter().enumerate() {
        if let Some(f) = ecm(n, b1, curves, effort.seed.wrapping_add(attempt * 31 + i as u64)) {
            return Some(f);
        }
    }
    match brent(n, effort.rho_iterations.saturating_sub(first), c) {
        RhoOutcome::Factor(f) => Some(f),
        RhoOutcome::Exhausted { .. } => None,
    }
}

/// Trial division to `effort.trial_bound`, then rho, then ECM, recursing on cofactors.
/// Parts that resist are multiplied into the flagged cofactor.
pub fn factorize(n: &Integer, effort: &FactorEffort) -> FactorizationResult {
    assert!(*n != 0, "factorize(0)");
    let negative = *n < 0;
    let mut m = Integer::from(n.abs_ref());
    if let Some(w) = m.to_u64() {
        let primes = factor_u64(w)
            .into_iter()
            .flat_map(|(p, e)| std::iter::repeat_n(Integer::from(p), e as usize))
            .collect();
        return FactorizationResult::from_parts(negative, primes, None);
    }
    let mut primes = Vec::new();
    for p in primes_up_to(effort.trial_bound) {
        if m == 1 {
            break;
        }
        let d = p as u32;
        while m.is_divisible_u(d) {
            m.div_exact_u_mut(d);
            primes.push(Integer::from(p));
        }
        if Integer::from(p) * Integer::from(p) > m {
            break;
        }
    }
    let mut stack = vec![m];
    let mut stubborn = Integer::from(1);
    let mut attempt = 0u64;
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if let Some(w) = m.to_u64() {
            for (p, e) in factor_u64(w) {
                primes.extend(std::iter::repeat_n(Integer::from(p), e as usize));
            }
            continue;
        }
        if is_prime(&m) {
            primes.push(m);
            continue;
        }
        if m.is_perfect_square() {
            let r = Integer::from(m.sqrt_ref());
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        attempt += 1;
        match split(&m, effort, attempt) {
            Some(f) => {
                let g = Integer::from(m.div_exact_ref(&f));
                stack.push(f);
                stack.push(g);
            }
            None => stubborn *= m,
        }
    }
    let cofactor = (stubborn != 1).then_some(stubborn);
    FactorizationResult::from_parts(negative, primes, cofactor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[u64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn small_and_word_sized() {
        let f = factorize(&Integer::from(63), &FactorEffort::default());
        assert_eq!(f.primes(), ints(&[3, 3, 7]));
        let m59 = (Integer::from(1) << 59) - 1u32;
        let f = factorize(&m59, &FactorEffort::default());
        assert_eq!(f.primes(), ints(&[179951, 3203431780337]));
        let f = factorize(&Integer::from(-12), &FactorEffort::default());
        assert!(f.is_negative());
        assert_eq!(f.product(), 12);
    }

    #[test]
    fn two_to_fifty_minus_three() {
        let n = (Integer::from(1) << 50) - 3u32;
        let f = factorize(&n, &FactorEffort::default());
        assert!(f.is_complete());
        assert_eq!(f.product(), n);
    }

    #[test]
    fn beyond_64_bits() {
        // 2^101 - 1 = 7432339208719 * 341117531003194129
        let n = (Integer::from(1) << 101) - 1u32;
        let f = factorize(&n, &FactorEffort::default());
        assert!(f.is_complete());
        assert_eq!(f.primes(), ints(&[7432339208719, 341117531003194129]));
    }

    #[test]
    fn perfect_square_of_big_prime() {
        let p: Integer = (Integer::from(1) << 89) - 1u32;
        let n = Integer::from(p.square_ref());
        let f = factorize(&n, &FactorEffort::light());
        assert_eq!(f.factors(), &[(p, 2)]);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        // two 30-digit primes; no chance with trial division only
        let p: Integer = "1000000000000000000000000000057".parse().unwrap();
        let q: Integer = "1000000000000000000000000000099".parse().unwrap();
        let n = Integer::from(&p * &q);
        let effort = FactorEffort { rho_iterations: 2000, ecm_stages: Vec::new(), ..FactorEffort::default() };
        let f = factorize(&n, &effort);
        assert!(!f.is_complete());
        assert_eq!(f.product(), n);
    }
}
