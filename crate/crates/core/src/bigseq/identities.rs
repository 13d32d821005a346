use rug::Integer;
use serde::{Deserialize, Serialize};

use super::LinearRecurrence;
use crate::arith::{divisors, moebius};
use crate::{Error, Result};

/// `phi_n = prod_{m | n} x_m^{mu(n/m)}` for a strong division sequence `x`.
///
/// Fails if some `x_m` vanishes or the quotient is not an integer, which means
/// `x` is not a strong division sequence at `n`.
pub fn phi_decomposition(divseq: &LinearRecurrence, n: u64) -> Result<Integer> {
    if n == 0 {
        return Err(Error::Domain("phi_0 is undefined".into()));
    }
    let mut num = Integer::from(1);
    let mut den = Integer::from(1);
    for m in divisors(n) {
        let mu = moebius(n / m);
        if mu == 0 {
            continue;
        }
        let x = divseq.term(m);
        if x == 0 {
            return Err(Error::Domain(format!("x_{m} = 0 in phi decomposition of index {n}")));
        }
        if mu > 0 {
            num *= x;
        } else {
            den *= x;
        }
    }
    if !num.is_divisible(&den) {
        return Err(Error::Domain(format!("{divseq} is not a strong division sequence at n = {n}")));
    }
    Ok(num.div_exact(&den))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftSign {
    Minus,
    Plus,
}

/// Indices `(i, j)` with `F_n + sign = F_i * L_j`, selected by `n mod 4`.
pub fn fibonacci_shift_identity(n: u64, sign: ShiftSign) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(Error::Domain("identity table starts at n = 1".into()));
    }
    let t = n / 4;
    let pair = match (n % 4, sign) {
        (0, ShiftSign::Minus) => (2 * t + 1, 2 * t - 1),
        (0, ShiftSign::Plus) => (2 * t - 1, 2 * t + 1),
        (1, ShiftSign::Minus) => (2 * t, 2 * t + 1),
        (1, ShiftSign::Plus) => (2 * t + 1, 2 * t),
        (2, ShiftSign::Minus) => (2 * t, 2 * t + 2),
        (2, ShiftSign::Plus) => (2 * t + 2, 2 * t),
        (3, ShiftSign::Minus) => (2 * t + 2, 2 * t + 1),
        (3, ShiftSign::Plus) => (2 * t + 1, 2 * t + 2),
        _ => unreachable!(),
    };
    Ok(pair)
}

pub fn fibonacci_number(n: u64) -> Integer {
    LinearRecurrence::fibonacci().term(n)
}

/// `L_0 = 2, L_1 = 1`
pub fn lucas_number(n: u64) -> Integer {
    if n == 0 {
        return Integer::from(2);
    }
    fibonacci_number(n + 1) + fibonacci_number(n - 1)
}
