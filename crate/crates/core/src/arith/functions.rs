use rug::Integer;

use super::factor::FactorizationResult;
use super::prp::is_prime_u64;
use crate::{Error, Result};

/// Primes `<= n` by an odd-only sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let half = ((n - 1) / 2) as usize; // odd numbers 3, 5, ..., index i <-> 2i+3
    let mut composite = vec![false; half];
    let mut i = 0usize;
    while {
        let p = 2 * i + 3;
        p * p <= n as usize
    } {
        if !composite[i] {
            let p = 2 * i + 3;
            let mut j = (p * p - 3) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(half / 4 + 1);
    out.push(2);
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 3),
    );
    out
}

/// `c mod m` in `[0, m)`.
pub(crate) fn mod_u64(c: &Integer, m: u64) -> u64 {
    let r = Integer::from(c % m);
    let r = r.to_i128().unwrap();
    r.rem_euclid(m as i128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_u64(a, b) * b
}

fn rho_u64(n: u64) -> u64 {
    debug_assert!(n > 3 && n % 2 == 1);
    for c in 1..u64::MAX {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            let mut q = 1u64;
            let mut steps = 0;
            let (xs, ys) = (x, y);
            for _ in 0..64 {
                x = f(x);
                y = f(f(y));
                q = mul_mod(q, x.abs_diff(y), n);
                steps += 1;
                if q == 0 {
                    break;
                }
            }
            d = gcd_u64(q, n);
            if d == n {
                // backtrack one step at a time
                let (mut x2, mut y2) = (xs, ys);
                d = 1;
                for _ in 0..steps {
                    x2 = f(x2);
                    y2 = f(f(y2));
                    d = gcd_u64(x2.abs_diff(y2), n);
                    if d != 1 {
                        break;
                    }
                }
            }
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

/// Complete factorization of a machine word, `(prime, exponent)` ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut p = 41u64;
    while p * p <= n && p < 5000 {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 2;
    }
    let mut stack = vec![n];
    let mut big = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            big.push(m);
            continue;
        }
        let d = rho_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
    big.sort_unstable();
    for q in big {
        match out.last_mut() {
            Some((p, e)) if *p == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out.sort_unstable();
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn moebius(n: u64) -> i32 {
    assert!(n >= 1, "moebius(0)");
    let f = factor_u64(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi(0)");
    factor_u64(n)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// `prod (p - 2)` over the primes of an odd squarefree `n`.
pub fn phi2(n: u64) -> Result<u64> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::Domain(format!("phi2 needs odd input, got {n}")));
    }
    let f = factor_u64(n);
    if f.iter().any(|&(_, e)| e > 1) {
        return Err(Error::Domain(format!("phi2 needs squarefree input, got {n}")));
    }
    Ok(f.into_iter().map(|(p, _)| p - 2).product())
}

/// Number of divisors.
pub fn tau(n: u64) -> u64 {
    assert!(n >= 1, "tau(0)");
    factor_u64(n).into_iter().map(|(_, e)| e as u64 + 1).product()
}

/// Carmichael's `lambda(n)`.
pub fn carmichael_lambda(n: u64) -> u64 {
    factor_u64(n).into_iter().fold(1, |acc, (p, e)| {
        let l = if p == 2 && e >= 3 {
            1u64 << (e - 2)
        } else {
            (p - 1) * p.pow(e - 1)
        };
        lcm_u64(acc, l)
    })
}

/// `Omega`: prime factors with multiplicity. A flagged cofactor counts as at least two.
pub fn omega_big(f: &FactorizationResult) -> u32 {
    let known: u32 = f.factors().iter().map(|(_, e)| *e).sum();
    known + if f.cofactor().is_some() { 2 } else { 0 }
}

/// `Omega_p`: prime factors `>= p` with multiplicity.
pub fn omega_p(f: &FactorizationResult, p: u64) -> u32 {
    let known: u32 = f
        .factors()
        .iter()
        .filter(|(q, _)| *q >= p)
        .map(|(_, e)| *e)
        .sum();
    let extra = match f.cofactor() {
        // every prime factor of the cofactor exceeds the trial bound
        Some(c) if *c > Integer::from(p) => 2,
        _ => 0,
    };
    known + extra
}
