use rug::Integer;
use serde::{Deserialize, Serialize};

use super::functions::primes_up_to;

/// Divisors of the form `k*p + 1`, `1 <= k <= k_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KpOne {
    pub p: u64,
    pub k_max: u64,
    /// Keep only candidates `= +-1 (mod 8)`, valid for divisors of `2^p - 1`.
    pub mod8: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    /// Try every prime up to this bound (0 disables).
    pub plain_bound: u64,
    pub kp_one: Option<KpOne>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialFactor {
    pub factor: Integer,
    /// Set when the factor came from the `kp+1` stage.
    pub k: Option<u64>,
}

fn divides(n: &Integer, d: u64) -> bool {
    match u32::try_from(d) {
        Ok(d32) => n.is_divisible_u(d32),
        Err(_) => n.is_divisible(&Integer::from(d)),
    }
}

/// First proper factor of `|n|` found by the configured trial stages.
pub fn trial_division(n: &Integer, config: &TrialConfig) -> Option<TrialFactor> {
    let abs = Integer::from(n.abs_ref());
    if abs <= 1 {
        return None;
    }
    if config.plain_bound >= 2 {
        for p in primes_up_to(config.plain_bound) {
            if Integer::from(p) >= abs {
                break;
            }
            if divides(&abs, p) {
                return Some(TrialFactor { factor: Integer::from(p), k: None });
            }
        }
    }
    if let Some(kp) = config.kp_one {
        for k in 1..=kp.k_max {
            let Some(d) = k.checked_mul(kp.p).and_then(|x| x.checked_add(1)) else {
                break;
            };
            if d < 2 || (d % 2 == 0 && d != 2) {
                continue;
            }
            if kp.mod8 && d % 8 != 1 && d % 8 != 7 {
                continue;
            }
            if Integer::from(d) >= abs {
                break;
            }
            if divides(&abs, d) {
                return Some(TrialFactor { factor: Integer::from(d), k: Some(k) });
            }
        }
    }
    None
}
