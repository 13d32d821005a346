use serde::{Deserialize, Serialize};

use crate::arith::mul_mod;
use crate::bigseq::LinearRecurrence;

/// Eventual period of `u_n mod m`: `u_{n+period} = u_n (mod m)` for all `n >= preperiod`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodRecord {
    pub modulus: u64,
    pub preperiod: u64,
    pub period: u64,
}

/// Steps the state `(u_n, ..., u_{n+k-1}) mod m`.
#[derive(Clone, Debug)]
pub struct ModStepper {
    coeffs: Vec<u64>,
    state: Vec<u64>,
    head: usize,
    m: u64,
}

impl ModStepper {
    pub fn new(rec: &LinearRecurrence, m: u64) -> Self {
        assert!(m >= 1);
        ModStepper { coeffs: rec.coefficients_mod(m), state: rec.initial_mod(m), head: 0, m }
    }

    /// Current `u_n mod m`.
    pub fn current(&self) -> u64 {
        self.state[self.head]
    }

    pub fn advance(&mut self) {
        let k = self.state.len();
        let mut next = 0u64;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            // a_{i+1} multiplies u_{n+k-1-i}
            let w = self.state[(self.head + k - 1 - i) % k];
            next += mul_mod(a, w, self.m);
            if next >= self.m {
                next -= self.m;
            }
        }
        self.state[self.head] = next;
        self.head = (self.head + 1) % k;
    }

    fn same_state(&self, other: &ModStepper) -> bool {
        let k = self.state.len();
        (0..k).all(|i| self.state[(self.head + i) % k] == other.state[(other.head + i) % k])
    }
}

impl Iterator for ModStepper {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let v = self.current();
        self.advance();
        Some(v)
    }
}

/// Exact `(preperiod, period)` of the state orbit mod `m` by Brent's cycle detection.
pub fn period_mod(rec: &LinearRecurrence, m: u64) -> PeriodRecord {
    assert!(m >= 1, "modulus must be positive");
    let start = ModStepper::new(rec, m);
    let mut tortoise = start.clone();
    let mut hare = start.clone();
    hare.advance();
    let (mut power, mut lam) = (1u64, 1u64);
    while !tortoise.same_state(&hare) {
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare.advance();
        lam += 1;
    }
    let mut tortoise = start.clone();
    let mut hare = start;
    for _ in 0..lam {
        hare.advance();
    }
    let mut mu = 0u64;
    while !tortoise.same_state(&hare) {
        tortoise.advance();
        hare.advance();
        mu += 1;
    }
    PeriodRecord { modulus: m, preperiod: mu, period: lam }
}

/// Checks `u_{n+period} = u_n (mod m)` for `preperiod <= n < preperiod + window`.
pub fn holds_on_window(rec: &LinearRecurrence, r: &PeriodRecord, window: u64) -> bool {
    let mut a = ModStepper::new(rec, r.modulus);
    for _ in 0..r.preperiod {
        a.advance();
    }
    let mut b = a.clone();
    for _ in 0..r.period {
        b.advance();
    }
    (0..window).all(|_| a.next() == b.next())
}

/// `u_n mod m` from `T^n mod (f, m)`, `O(k^2 log n)` word operations.
pub fn term_mod(rec: &LinearRecurrence, n: u64, m: u64) -> u64 {
    assert!(m >= 1, "modulus must be positive");
    if m == 1 {
        return 0;
    }
    let a = rec.coefficients_mod(m);
    let init = rec.initial_mod(m);
    let k = a.len();
    if n < k as u64 {
        return init[n as usize];
    }
    let add = |x: u64, y: u64| {
        let (s, carry) = x.overflowing_add(y);
        if carry || s >= m { s.wrapping_sub(m) } else { s }
    };
    // product of two residues of degree < k, reduced by T^k = a_1 T^{k-1} + ... + a_k
    let mul = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; 2 * k - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                out[i + j] = add(out[i + j], mul_mod(xi, yj, m));
            }
        }
        for d in (k..2 * k - 1).rev() {
            let top = out[d];
            if top == 0 {
                continue;
            }
            for (i, &ai) in a.iter().enumerate() {
                out[d - 1 - i] = add(out[d - 1 - i], mul_mod(top, ai, m));
            }
        }
        out.truncate(k);
        out
    };
    let mut acc = vec![0u64; k];
    acc[0] = 1;
    let mut base = vec![0u64; k];
    if k == 1 {
        base[0] = a[0];
    } else {
        base[1] = 1;
    }
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    acc.iter().zip(&init).fold(0, |s, (&c, &u)| add(s, mul_mod(c, u, m)))
}
