use rug::Integer;

use crate::arith::{carmichael_lambda, factor_u64, gcd_u64, mod_u64, pow_mod};
use crate::{Error, Result};

/// Least `t >= 1` with `g^t = 1 (mod m)`, found by descending from `lambda(m)`.
pub fn multiplicative_order(g: &Integer, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Domain("modulus 0".into()));
    }
    if m == 1 {
        return Ok(1);
    }
    let gm = mod_u64(g, m);
    if gcd_u64(gm, m) != 1 {
        return Err(Error::NotInvertible { g: g.clone(), m });
    }
    let mut t = carmichael_lambda(m);
    for (q, _) in factor_u64(t) {
        while t % q == 0 && pow_mod(gm, t / q, m) == 1 {
            t /= q;
        }
    }
    Ok(t)
}

/// `ord_m(2)` for odd `m`.
pub fn order_of_two(m: u64) -> Result<u64> {
    multiplicative_order(&Integer::from(2), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: u64, m: u64) -> u64 {
        let mut x = g % m;
        let mut t = 1;
        while x != 1 {
            x = x * g % m;
            t += 1;
        }
        t
    }

    #[test]
    fn examples() {
        assert_eq!(order_of_two(7).unwrap(), 3);
        assert_eq!(order_of_two(341).unwrap(), 10);
        assert_eq!(order_of_two(15).unwrap(), 4);
        assert_eq!(order_of_two(1).unwrap(), 1);
        assert!(matches!(order_of_two(12), Err(Error::NotInvertible { .. })));
        assert_eq!(multiplicative_order(&Integer::from(-1), 7).unwrap(), 2);
    }

    #[test]
    fn agrees_with_brute_force() {
        for m in (3..2000).step_by(2) {
            for g in [2u64, 3, 10] {
                if gcd_u64(g, m) == 1 {
                    assert_eq!(multiplicative_order(&Integer::from(g), m).unwrap(), brute(g, m), "g={g} m={m}");
                }
            }
        }
    }
}
