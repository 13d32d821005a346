use rug::ops::RemRounding;
use rug::Integer;
use serde::{Deserialize, Serialize};

use super::{erdos_system, verify_sequence_covering, CoveringSystem};
use crate::bigseq::LinearRecurrence;
use crate::Result;

/// `p_0..p_5`: the Fermat primes `F_0..F_4` and `641`.
const SMALL: [u64; 6] = [3, 5, 17, 257, 65537, 641];
const P6: u64 = 6_700_417;

fn modulus() -> Integer {
    (Integer::from(1) << 64u32) - 1u32
}

/// `r mod 2^64 - 1` with `r = 1 (mod p_0...p_5)` and `r = -1 (mod p_6)`.
pub fn erdos_residue() -> Integer {
    let m1 = SMALL.iter().fold(Integer::from(1), |a, &p| a * p);
    let m2 = Integer::from(P6);
    // r = 1 + m1 * t with m1 * t = -2 (mod p_6)
    let inv = m1.clone().invert(&m2).expect("coprime moduli");
    let t = (Integer::from(-2) * inv).rem_euc(&m2);
    let r = Integer::from(1) + m1 * t;
    debug_assert!(r < modulus());
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErdosConstruction {
    pub a: Integer,
    pub b: Integer,
    pub r: Integer,
    pub system: CoveringSystem,
    /// `gcd(a*2^n + b, 2^64 - 1) > 1` for every `0 <= n < 64`.
    pub gcd_scan: bool,
    /// The system covers and each of its primes divides on its class.
    pub covering: bool,
}

impl ErdosConstruction {
    pub fn verified(&self) -> bool {
        self.gcd_scan && self.covering
    }
}

/// `gcd(a*2^n + b, 2^64 - 1) > 1` for all `0 <= n < 64`.
pub fn erdos_gcd_scan(a: &Integer, b: &Integer) -> bool {
    let m = modulus();
    (0..64u32).all(|n| {
        let v = Integer::from(a << n) + b;
        v.gcd(&m) != 1
    })
}

/// Picks `b = a*r (mod 2^64 - 1)` in `[1, 2^64 - 1]`, which gives `a = r b` since `r^2 = 1`.
pub fn erdos_construction(a: Option<Integer>) -> Result<ErdosConstruction> {
    let m = modulus();
    let r = erdos_residue();
    let a = a.unwrap_or_else(|| Integer::from(1));
    let mut b = Integer::from(&a * &r).rem_euc(&m);
    if b == 0 {
        b = m.clone();
    }
    check(a, b, r)
}

/// Verifies an arbitrary pair against the construction.
pub fn erdos_check(a: Integer, b: Integer) -> Result<ErdosConstruction> {
    check(a, b, erdos_residue())
}

fn check(a: Integer, b: Integer, r: Integer) -> Result<ErdosConstruction> {
    let system = erdos_system();
    let gcd_scan = erdos_gcd_scan(&a, &b);
    let covering = match LinearRecurrence::geometric_shift(a.clone(), b.clone()) {
        Ok(rec) => verify_sequence_covering(&rec, &system)?.holds(),
        Err(_) => false,
    };
    Ok(ErdosConstruction { a, b, r, system, gcd_scan, covering })
}
