//! Exact integer linear recurrences.
//!
//! A [`LinearRecurrence`] stores the recurrence law
//! `u_{n+k} = a_1 u_{n+k-1} + ... + a_k u_n` together with `u_0..u_{k-1}` and a
//! [`Family`] tag. The tag never changes the values; it only unlocks closed-form
//! evaluation and tells other modules which structural facts they may rely on
//! (division sequences, repunit index restrictions, interleavings).

mod charpoly;
mod identities;
mod spec;

use std::fmt;

use rug::ops::Pow;
use rug::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::poly::IntPoly;
use crate::{Error, Result};

pub use charpoly::CharPoly;
pub use identities::{
    fibonacci_number, fibonacci_shift_identity, lucas_number, phi_decomposition, ShiftSign,
};
pub use spec::parse_spec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Generic,
    /// `a*2^n + b`
    GeometricShift { a: Integer, b: Integer },
    /// `alpha^n - beta^n`, optionally divided by `alpha - beta`.
    TwoTerm { alpha: Integer, beta: Integer, divided: bool },
    /// `u_0 = 0, u_1 = 1, u_n = a u_{n-1} + b u_{n-2}`
    Lucas { a: Integer, b: Integer },
    /// `F_n + c`
    FibonacciShift { c: Integer },
    /// `(base^{pn} - 1)/(base^n - 1)` with `u_0 = p`.
    RepunitRatio { p: u32, base: Integer },
    /// `U_{a+mq} = parts[a]_m`
    Combination { parts: Vec<LinearRecurrence> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRecurrence {
    coefficients: Vec<Integer>,
    initial: Vec<Integer>,
    family: Family,
}

impl LinearRecurrence {
    /// A recurrence with explicit coefficients `a_1..a_k` and terms `u_0..u_{k-1}`.
    pub fn new(coefficients: Vec<Integer>, initial: Vec<Integer>) -> Result<Self> {
        Self::with_family(coefficients, initial, Family::Generic)
    }

    fn with_family(coefficients: Vec<Integer>, initial: Vec<Integer>, family: Family) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidSequence("order must be at least 1".into()));
        }
        if coefficients.len() != initial.len() {
            return Err(Error::InvalidSequence(format!(
                "{} coefficients but {} initial terms",
                coefficients.len(),
                initial.len()
            )));
        }
        if *coefficients.last().unwrap() == 0 {
            return Err(Error::InvalidSequence("a_k must be non-zero".into()));
        }
        Ok(LinearRecurrence { coefficients, initial, family })
    }

    pub fn from_i64(coefficients: &[i64], initial: &[i64]) -> Result<Self> {
        Self::new(
            coefficients.iter().map(|&c| Integer::from(c)).collect(),
            initial.iter().map(|&c| Integer::from(c)).collect(),
        )
    }

    /// `a*2^n + b`, realised as `u_{n+2} = 3u_{n+1} - 2u_n`.
    pub fn geometric_shift(a: impl Into<Integer>, b: impl Into<Integer>) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        if a == 0 {
            return Err(Error::InvalidSequence("a = 0 gives a constant sequence".into()));
        }
        let u0 = Integer::from(&a + &b);
        let u1 = Integer::from(&a * 2u32) + &b;
        Self::with_family(
            vec![Integer::from(3), Integer::from(-2)],
            vec![u0, u1],
            Family::GeometricShift { a, b },
        )
    }

    pub fn mersenne() -> Self {
        Self::geometric_shift(1, -1).unwrap()
    }

    pub fn two_term(alpha: impl Into<Integer>, beta: impl Into<Integer>, divided: bool) -> Result<Self> {
        let (alpha, beta) = (alpha.into(), beta.into());
        if alpha == beta {
            return Err(Error::InvalidSequence("alpha = beta".into()));
        }
        let abs_beta = Integer::from(beta.abs_ref());
        if !(alpha > abs_beta && abs_beta >= 1) {
            return Err(Error::InvalidSequence("need alpha > |beta| >= 1".into()));
        }
        if Integer::from(alpha.gcd_ref(&beta)) != 1 {
            return Err(Error::InvalidSequence(format!("gcd({alpha}, {beta}) != 1")));
        }
        let sum = Integer::from(&alpha + &beta);
        let prod = -Integer::from(&alpha * &beta);
        let u1 = if divided { Integer::from(1) } else { Integer::from(&alpha - &beta) };
        Self::with_family(
            vec![sum, prod],
            vec![Integer::new(), u1],
            Family::TwoTerm { alpha, beta, divided },
        )
    }

    pub fn lucas(a: impl Into<Integer>, b: impl Into<Integer>) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        let disc = Integer::from(a.square_ref()) + Integer::from(&b * 4u32);
        if disc <= 0 {
            return Err(Error::InvalidSequence(format!("discriminant {disc} <= 0")));
        }
        if b == 0 {
            return Err(Error::InvalidSequence("b = 0 is not a second-order sequence".into()));
        }
        Self::with_family(
            vec![a.clone(), b.clone()],
            vec![Integer::new(), Integer::from(1)],
            Family::Lucas { a, b },
        )
    }

    pub fn fibonacci() -> Self {
        Self::lucas(1, 1).unwrap()
    }

    /// `F_n + c` as the order-3 recurrence with coefficients `(2, 0, -1)`.
    pub fn fibonacci_shift(c: impl Into<Integer>) -> Self {
        let c = c.into();
        let init = vec![c.clone(), Integer::from(&c + 1), Integer::from(&c + 1)];
        Self::with_family(
            vec![Integer::from(2), Integer::new(), Integer::from(-1)],
            init,
            Family::FibonacciShift { c },
        )
        .unwrap()
    }

    /// `(base^{pn}-1)/(base^n-1)` of order `p`, roots `base^j` for `0 <= j < p`.
    pub fn repunit_ratio(p: u32, base: impl Into<Integer>) -> Result<Self> {
        let base = base.into();
        if p < 2 {
            return Err(Error::InvalidSequence("repunit ratio needs p >= 2".into()));
        }
        if base < 2 {
            return Err(Error::InvalidSequence("repunit ratio needs base >= 2".into()));
        }
        let mut f = IntPoly::one();
        for j in 0..p {
            f = f.mul(&IntPoly::linear_root(&Integer::from(base.clone().pow(j))));
        }
        let coefficients = coefficients_from_charpoly(&f);
        let family = Family::RepunitRatio { p, base };
        let initial = (0..p as u64).map(|n| closed_form(&family, n).unwrap()).collect();
        Self::with_family(coefficients, initial, family)
    }

    /// Interleaves `parts` so that `U_{a + m q} = parts[a]_m` with `q = parts.len()`.
    pub fn combine(parts: Vec<LinearRecurrence>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSequence("combination of no sequences".into()));
        }
        if parts.len() < 2 {
            return Err(Error::InvalidSequence("combination needs q >= 2 parts".into()));
        }
        let q = parts.len();
        let mut f = IntPoly::one();
        for part in &parts {
            f = f.lcm_monic(&part.char_polynomial().compose_power(q));
        }
        let coefficients = coefficients_from_charpoly(&f);
        let k = coefficients.len();
        let initial = (0..k).map(|n| parts[n % q].term((n / q) as u64)).collect();
        Self::with_family(coefficients, initial, Family::Combination { parts })
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.coefficients
    }

    pub fn initial_terms(&self) -> &[Integer] {
        &self.initial
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `T^k - a_1 T^{k-1} - ... - a_k`, lowest degree first.
    pub fn char_polynomial(&self) -> IntPoly {
        let mut c: Vec<Integer> = self.coefficients.iter().rev().map(|a| Integer::from(-a)).collect();
        c.push(Integer::from(1));
        IntPoly::new(c)
    }

    pub fn char_poly(&self) -> CharPoly {
        CharPoly::new(self.char_polynomial())
    }

    /// True for the families known to be strong linear division sequences.
    pub fn is_division_sequence(&self) -> bool {
        match &self.family {
            Family::TwoTerm { .. } | Family::Lucas { .. } => true,
            Family::GeometricShift { a, b } => *a == 1 && *b == -1,
            _ => false,
        }
    }

    /// The exact term `u_n`.
    pub fn term(&self, n: u64) -> Integer {
        if let Some(v) = closed_form(&self.family, n) {
            return v;
        }
        let k = self.order() as u64;
        if n < 8 * k + 64 {
            self.term_by_unrolling(n)
        } else {
            self.term_by_polynomial_power(n)
        }
    }

    /// `u_n` by stepping the recurrence from the initial terms.
    pub fn term_by_unrolling(&self, n: u64) -> Integer {
        self.terms().nth(n as usize).unwrap()
    }

    /// `u_n` from `T^n mod f(T)`, `O(k^2 log n)` big multiplications.
    fn term_by_polynomial_power(&self, n: u64) -> Integer {
        let k = self.order();
        // reduce modulo the monic f: T^k = a_1 T^{k-1} + ... + a_k
        let reduce = |mut p: Vec<Integer>| -> Vec<Integer> {
            while p.len() > k {
                let top = p.pop().unwrap();
                if top == 0 {
                    continue;
                }
                let d = p.len() - k;
                for (i, a) in self.coefficients.iter().enumerate() {
                    p[d + k - 1 - i] += Integer::from(&top * a);
                }
            }
            p
        };
        let mul = |x: &[Integer], y: &[Integer]| -> Vec<Integer> {
            let mut out = vec![Integer::new(); x.len() + y.len() - 1];
            for (i, a) in x.iter().enumerate() {
                if *a == 0 {
                    continue;
                }
                for (j, b) in y.iter().enumerate() {
                    out[i + j] += Integer::from(a * b);
                }
            }
            reduce(out)
        };
        let mut acc = reduce(vec![Integer::from(1)]);
        let mut base = reduce(vec![Integer::new(), Integer::from(1)]);
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
        acc.iter()
            .zip(&self.initial)
            .fold(Integer::new(), |s, (c, u)| s + Integer::from(c * u))
    }

    /// Streams `u_0, u_1, ...` by the recurrence law.
    pub fn terms(&self) -> Terms<'_> {
        Terms { rec: self, window: self.initial.clone(), pos: 0 }
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn coefficients_mod(&self, m: u64) -> Vec<u64> {
        reduce_all(&self.coefficients, m)
    }

    /// Initial terms reduced into `[0, m)`.
    pub fn initial_mod(&self, m: u64) -> Vec<u64> {
        reduce_all(&self.initial, m)
    }
}

fn reduce_all(v: &[Integer], m: u64) -> Vec<u64> {
    v.iter().map(|c| crate::arith::mod_u64(c, m)).collect()
}

fn coefficients_from_charpoly(f: &IntPoly) -> Vec<Integer> {
    debug_assert!(f.is_monic());
    let c = f.coeffs();
    let k = c.len() - 1;
    (1..=k).map(|i| Integer::from(-&c[k - i])).collect()
}

fn closed_form(family: &Family, n: u64) -> Option<Integer> {
    let n32 = u32::try_from(n).ok()?;
    match family {
        Family::Generic => None,
        Family::GeometricShift { a, b } => Some(Integer::from(a << n32) + b),
        Family::TwoTerm { alpha, beta, divided } => {
            let diff = Integer::from(alpha.pow(n32)) - Integer::from(beta.pow(n32));
            Some(if *divided { diff.div_exact(&Integer::from(alpha - beta)) } else { diff })
        }
        Family::Lucas { a, b } => Some(lucas_u(a, b, n)),
        Family::FibonacciShift { c } => Some(lucas_u(&Integer::from(1), &Integer::from(1), n) + c),
        Family::RepunitRatio { p, base } => {
            if n == 0 {
                return Some(Integer::from(*p));
            }
            let bn = Integer::from(base.pow(n32));
            let num = Integer::from((&bn).pow(*p)) - 1u32;
            Some(num.div_exact(&(bn - 1u32)))
        }
        Family::Combination { parts } => {
            let q = parts.len() as u64;
            Some(parts[(n % q) as usize].term(n / q))
        }
    }
}

/// `U_n` for `u_n = a u_{n-1} + b u_{n-2}`, `u_0 = 0`, `u_1 = 1`, by fast doubling.
fn lucas_u(a: &Integer, b: &Integer, n: u64) -> Integer {
    // Lucas pair with P = a, Q = -b.
    let p = a.clone();
    let q = Integer::from(-b);
    let d = Integer::from(p.square_ref()) - Integer::from(&q * 4u32);
    let (mut u, mut v, mut qk) = (Integer::new(), Integer::from(2), Integer::from(1));
    if n == 0 {
        return u;
    }
    for bit in (0..64 - n.leading_zeros()).rev() {
        // double
        let u2 = Integer::from(&u * &v);
        let v2 = Integer::from(v.square_ref()) - Integer::from(&qk * 2u32);
        qk.square_mut();
        u = u2;
        v = v2;
        if (n >> bit) & 1 == 1 {
            let u1 = (Integer::from(&p * &u) + &v).div_exact(&Integer::from(2));
            let v1 = (Integer::from(&d * &u) + Integer::from(&p * &v)).div_exact(&Integer::from(2));
            qk *= &q;
            u = u1;
            v = v1;
        }
    }
    u
}

pub struct Terms<'a> {
    rec: &'a LinearRecurrence,
    window: Vec<Integer>,
    pos: usize,
}

impl Iterator for Terms<'_> {
    type Item = Integer;

    fn next(&mut self) -> Option<Integer> {
        let k = self.rec.order();
        let idx = self.pos % k;
        let out = self.window[idx].clone();
        // window holds u_pos .. u_{pos+k-1} cyclically starting at idx
        let mut next = Integer::new();
        for (i, a) in self.rec.coefficients.iter().enumerate() {
            // a_{i+1} multiplies u_{pos+k-1-i}
            let w = &self.window[(idx + k - 1 - i) % k];
            next += Integer::from(a * w);
        }
        self.window[idx] = next;
        self.pos += 1;
        Some(out)
    }
}

impl fmt::Display for LinearRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        spec::write_spec(self, f)
    }
}

impl std::str::FromStr for LinearRecurrence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

impl Serialize for LinearRecurrence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LinearRecurrence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_spec(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_shift_terms() {
        let m = LinearRecurrence::geometric_shift(1, -1).unwrap();
        assert_eq!(m.term(7), 127);
        assert_eq!(m.term(13), 8191);
        assert_eq!(LinearRecurrence::geometric_shift(3, 5).unwrap().term(4), 53);
        assert_eq!(LinearRecurrence::geometric_shift(1, 78557).unwrap().term(1), 78559);
        assert_eq!(LinearRecurrence::geometric_shift(1, -7).unwrap().term(2), -3);
        assert!(LinearRecurrence::geometric_shift(0, 5).is_err());
    }

    #[test]
    fn geometric_shift_initial_terms() {
        let r = LinearRecurrence::geometric_shift(3, 5).unwrap();
        assert_eq!(r.coefficients(), &[Integer::from(3), Integer::from(-2)]);
        assert_eq!(r.initial_terms(), &[Integer::from(8), Integer::from(11)]);
    }

    #[test]
    fn two_term_terms() {
        assert_eq!(LinearRecurrence::two_term(2, 1, true).unwrap().term(5), 31);
        assert_eq!(LinearRecurrence::two_term(3, 1, true).unwrap().term(3), 13);
        assert_eq!(LinearRecurrence::two_term(5, 3, true).unwrap().term(2), 8);
        assert_eq!(LinearRecurrence::two_term(3, 2, false).unwrap().term(3), 19);
        assert!(LinearRecurrence::two_term(4, 2, true).is_err());
        assert!(LinearRecurrence::two_term(3, 3, true).is_err());
    }

    #[test]
    fn lucas_and_shift_terms() {
        assert_eq!(LinearRecurrence::fibonacci().term(10), 55);
        assert_eq!(LinearRecurrence::fibonacci_shift(-4).term(10), 51);
        assert_eq!(LinearRecurrence::fibonacci_shift(2).term(3), 4);
        assert!(LinearRecurrence::lucas(1, -1).is_err());
    }

    #[test]
    fn fibonacci_100_fast_and_slow_agree() {
        let f = LinearRecurrence::fibonacci();
        let expect: Integer = "354224848179261915075".parse().unwrap();
        assert_eq!(f.term(100), expect);
        assert_eq!(f.term_by_unrolling(100), expect);
        assert_eq!(f.term_by_polynomial_power(100), expect);
    }

    #[test]
    fn combination_interleaves() {
        let u = LinearRecurrence::combine(vec![
            LinearRecurrence::geometric_shift(1, -1).unwrap(),
            LinearRecurrence::geometric_shift(1, 1).unwrap(),
        ])
        .unwrap();
        // parts (2^m - 1, 2^m + 1) interleaved: U_3 = parts[1]_1 = 3, U_4 = parts[0]_2 = 3
        assert_eq!(u.term(3), 3);
        assert_eq!(u.term(4), 3);
        assert_eq!(u.term_by_unrolling(9), u.term(9));
        assert!(LinearRecurrence::combine(vec![]).is_err());
    }

    #[test]
    fn repunit_ratio_terms() {
        let r = LinearRecurrence::repunit_ratio(3, 2).unwrap();
        assert_eq!(r.order(), 3);
        assert_eq!(r.term(0), 3);
        assert_eq!(r.term(1), 7);
        assert_eq!(r.term(2), 21);
        assert_eq!(r.term_by_unrolling(20), r.term(20));
    }

    #[test]
    fn rejects_degenerate_custom() {
        assert!(LinearRecurrence::from_i64(&[1, 0], &[1, 1]).is_err());
        assert!(LinearRecurrence::from_i64(&[], &[]).is_err());
        assert!(LinearRecurrence::from_i64(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn generic_polynomial_power_matches_unrolling() {
        let r = LinearRecurrence::from_i64(&[2, 3, -1], &[1, -2, 5]).unwrap();
        for n in [0, 1, 2, 3, 50, 131, 200] {
            assert_eq!(r.term_by_polynomial_power(n), r.term_by_unrolling(n), "n = {n}");
        }
    }
}
