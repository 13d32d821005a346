//! Checks shared by the property tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recprimes::arith::{divisors, factorize, is_probable_prime, omega_big, strong_probable_prime, FactorEffort};
use recprimes::bigseq::{parse_spec, phi_decomposition};
use recprimes::census::census;
use recprimes::moddyn::{holds_on_window, period_mod};
use recprimes::{CensusPolicy, Integer, LinearRecurrence, PeriodRecord, PrpPolicy};

pub type Check = Result<(), String>;

pub fn eratosthenes(n: usize) -> Vec<bool> {
    let mut is = vec![true; n];
    is[0] = false;
    if n > 1 {
        is[1] = false;
    }
    let mut i = 2;
    while i * i < n {
        if is[i] {
            let mut j = i * i;
            while j < n {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn thread_invariance(specs: &[&str], n_max: u64) -> Check {
    for spec in specs {
        let rec = parse_spec(spec).map_err(|e| e.to_string())?;
        let runs: Vec<_> = [1, 4, 16]
            .into_iter()
            .map(|t| census(&rec, n_max, &CensusPolicy { threads: Some(t), ..Default::default() }))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if !runs[0].same_results(&runs[1]) || !runs[0].same_results(&runs[2]) {
            return Err(format!("{spec}: reports differ across 1/4/16 threads"));
        }
    }
    Ok(())
}

/// A logged run to `cut`, resumed to `n_max`, against a fresh run to `n_max`.
pub fn resume_equivalence(rec: &LinearRecurrence, cut: u64, n_max: u64) -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let logged = CensusPolicy { log: Some(dir.path().join("v.log")), ..Default::default() };
    let e = |e: recprimes::Error| e.to_string();
    census(rec, cut, &logged).map_err(e)?;
    let resumed = census(rec, n_max, &logged).map_err(e)?;
    let fresh = census(rec, n_max, &CensusPolicy::default()).map_err(e)?;
    if resumed.same_results(&fresh) {
        Ok(())
    } else {
        Err(format!("{rec}: resume from {cut} to {n_max} differs"))
    }
}

/// Every `n < limit` through `is_probable_prime`, and every `step`-th odd `n` through
/// the big-integer strong test with bases 2, 3, 5, 7.
pub fn prp_vs_sieve(limit: usize, step: usize) -> Check {
    let sieve = eratosthenes(limit);
    let policy = PrpPolicy::default();
    for (i, &p) in sieve.iter().enumerate() {
        if is_probable_prime(&Integer::from(i), &policy).is_prime() != p {
            return Err(format!("is_probable_prime({i}) disagrees with the sieve"));
        }
    }
    let bases = [2u32, 3, 5, 7].map(Integer::from);
    for i in (9..limit).step_by(step).filter(|i| i % 2 == 1) {
        let n = Integer::from(i);
        let all = bases.iter().filter(|a| **a < n).all(|a| strong_probable_prime(&n, a));
        if all != sieve[i] {
            return Err(format!("strong tests on {i} disagree with the sieve"));
        }
    }
    Ok(())
}

/// `gcd(x_m, x_n) = |x_gcd(m,n)|` for `1 <= m <= n <= n_max`.
pub fn gcd_law(rec: &LinearRecurrence, n_max: u64) -> Check {
    let x: Vec<Integer> = (0..=n_max).map(|n| rec.term(n)).collect();
    for m in 1..=n_max {
        for n in m..=n_max {
            let g = Integer::from(x[m as usize].gcd_ref(&x[n as usize]));
            if g != Integer::from(x[gcd(m, n) as usize].abs_ref()) {
                return Err(format!("{rec}: gcd law fails at m = {m}, n = {n}"));
            }
        }
    }
    Ok(())
}

/// `prod_{d|n} phi_d = x_n` and `Omega(x_n) = sum_{d|n} Omega(phi_d)`.
pub fn omega_additivity(rec: &LinearRecurrence, n_max: u64) -> Check {
    let effort = FactorEffort::default();
    for n in 1..=n_max {
        let whole = factorize(&rec.term(n), &effort);
        let mut product = Integer::from(1);
        let mut pieces = 0;
        let mut complete = whole.is_complete();
        for d in divisors(n) {
            let phi = phi_decomposition(rec, d).map_err(|e| e.to_string())?;
            let f = factorize(&phi, &effort);
            complete &= f.is_complete();
            pieces += omega_big(&f);
            product *= phi;
        }
        if !complete {
            return Err(format!("{rec}: factorization at n = {n} incomplete"));
        }
        if product != rec.term(n) || omega_big(&whole) != pieces {
            return Err(format!("{rec}: additivity fails at n = {n}"));
        }
    }
    Ok(())
}

/// Smallest `(preperiod, period)` of the state orbit, by remembering every state.
pub fn brute_period(coeffs: &[i64], init: &[i64], m: u64) -> (u64, u64) {
    let k = coeffs.len();
    let mi = m as i64;
    let mut state: Vec<i64> = init.iter().map(|v| v.rem_euclid(mi)).collect();
    let mut seen: HashMap<Vec<i64>, u64> = HashMap::new();
    let mut n = 0u64;
    loop {
        if let Some(&first) = seen.get(&state) {
            return (first, n - first);
        }
        seen.insert(state.clone(), n);
        // a_{i+1} multiplies u_{n+k-1-i}
        let next = (0..k).map(|i| coeffs[i] * state[k - 1 - i]).sum::<i64>().rem_euclid(mi);
        state.remove(0);
        state.push(next);
        n += 1;
    }
}

/// `period_mod` against the brute-force orbit, plus: the period holds, no proper divisor
/// of it does, and the preperiod cannot be lowered.
pub fn period_minimal(coeffs: &[i64], init: &[i64], m: u64) -> Check {
    let rec = LinearRecurrence::from_i64(coeffs, init).map_err(|e| e.to_string())?;
    let r = period_mod(&rec, m);
    let tag = format!("{coeffs:?} {init:?} mod {m}");
    if (r.preperiod, r.period) != brute_period(coeffs, init, m) {
        return Err(format!("{tag}: got {r:?}"));
    }
    let window = 3 * r.period + 8 * coeffs.len() as u64;
    if !holds_on_window(&rec, &r, window) {
        return Err(format!("{tag}: period does not hold"));
    }
    for q in divisors(r.period).into_iter().filter(|&q| q < r.period) {
        if holds_on_window(&rec, &PeriodRecord { period: q, ..r }, window) {
            return Err(format!("{tag}: {q} is a shorter period"));
        }
    }
    if r.preperiod > 0 && holds_on_window(&rec, &PeriodRecord { preperiod: r.preperiod - 1, ..r }, 1) {
        return Err(format!("{tag}: preperiod not minimal"));
    }
    Ok(())
}

/// `count` random recurrences of order 1 to 3 with moduli up to 400.
pub fn random_period_instances(seed: u64, count: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let k = rng.random_range(1..=3);
        let mut coeffs: Vec<i64> = (0..k).map(|_| rng.random_range(-9..=9)).collect();
        if coeffs[k - 1] == 0 {
            coeffs[k - 1] = 1;
        }
        let init: Vec<i64> = (0..k).map(|_| rng.random_range(-20..=20)).collect();
        period_minimal(&coeffs, &init, rng.random_range(2..=400))?;
    }
    Ok(())
}
