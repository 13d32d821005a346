use rug::ops::Pow;
use rug::Integer;
use serde::{Deserialize, Serialize};

use super::fixed::Fixed;
use crate::arith::{factor_u64, phi2, primes_up_to};
use crate::moddyn::order_of_two;
use crate::{Error, Result};

/// Decimal places kept in [`ConstantEstimate::value`].
pub const DIGITS: u32 = 40;

/// Default prime cutoff for the `C_2` factor inside `C_v`.
pub const CV_TWIN_PMAX: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
    Oscillating,
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationParam {
    PMax,
    DMax,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub parameter: TruncationParam,
    pub value: u64,
}

/// A truncated product or sum. The limit itself is never claimed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub name: String,
    /// Truncated decimal expansion.
    pub value: String,
    pub value_f64: f64,
    pub truncation: Truncation,
    /// How the estimate moves as the truncation grows.
    pub direction: Direction,
    /// Bound on `|limit - value|`, when one is known.
    pub tail_bound: Option<f64>,
}

impl ConstantEstimate {
    fn new(name: &str, v: &Fixed, parameter: TruncationParam, cut: u64, direction: Direction, tail_bound: Option<f64>) -> Self {
        ConstantEstimate {
            name: name.to_string(),
            value: v.to_decimal(DIGITS),
            value_f64: v.to_f64(),
            truncation: Truncation { parameter, value: cut },
            direction,
            tail_bound,
        }
    }

    /// The stored decimal as an exact integer scaled by `10^DIGITS`, for exact comparisons.
    pub fn scaled(&self) -> Integer {
        let digits: String = self.value.chars().filter(|c| *c != '.').collect();
        digits.parse().expect("decimal produced by to_decimal")
    }
}

fn odd_primes(p_max: u64) -> impl Iterator<Item = u64> {
    primes_up_to(p_max).into_iter().filter(|&p| p > 2)
}

fn twin_fixed(p_max: u64) -> Fixed {
    let mut acc = Fixed::from_int(2);
    for p in odd_primes(p_max) {
        let q = Integer::from(p - 1).pow(2);
        acc = acc.mul(&Fixed::ratio(q.clone() - 1u32, q));
    }
    acc
}

/// `C_2 = 2 prod_{3 <= p <= p_max} (1 - 1/(p-1)^2)`.
pub fn twin_constant(p_max: u64) -> Result<ConstantEstimate> {
    if p_max < 3 {
        return Err(Error::Domain(format!("twin_constant needs p_max >= 3, got {p_max}")));
    }
    let v = twin_fixed(p_max);
    // the missing factors are >= 1 - sum_{n > p_max} 1/(n-1)^2 >= 1 - 1/(p_max - 1)
    let tail = v.to_f64() / (p_max - 1) as f64;
    Ok(ConstantEstimate::new("C2", &v, TruncationParam::PMax, p_max, Direction::Decreasing, Some(tail)))
}

/// `C_v = C_2 sum_{odd squarefree d <= d_max} 1/(phi_2(d) ord_d(2))`, with `C_2` cut at [`CV_TWIN_PMAX`].
pub fn cv_constant(d_max: u64) -> Result<ConstantEstimate> {
    cv_constant_with(d_max, CV_TWIN_PMAX)
}

pub fn cv_constant_with(d_max: u64, twin_p_max: u64) -> Result<ConstantEstimate> {
    if d_max < 1 {
        return Err(Error::Domain("cv_constant needs d_max >= 1".into()));
    }
    if twin_p_max < 3 {
        return Err(Error::Domain(format!("C2 cutoff must be >= 3, got {twin_p_max}")));
    }
    let mut sum = Fixed::zero();
    for d in (1..=d_max).step_by(2) {
        if factor_u64(d).iter().any(|&(_, e)| e > 1) {
            continue;
        }
        let den = Integer::from(phi2(d)?) * order_of_two(d)?;
        sum = sum.add(&Fixed::ratio(1, den));
    }
    let v = twin_fixed(twin_p_max).mul(&sum);
    Ok(ConstantEstimate::new("Cv", &v, TruncationParam::DMax, d_max, Direction::Increasing, None))
}

/// `prod_{p <= p_max} (1 + 1/(p-1)^3)`.
pub fn cv_lower_bound(p_max: u64) -> Result<ConstantEstimate> {
    if p_max < 2 {
        return Err(Error::Domain(format!("cv_lower_bound needs p_max >= 2, got {p_max}")));
    }
    let mut acc = Fixed::from_int(1);
    for p in primes_up_to(p_max) {
        let c = Integer::from(p - 1).pow(3);
        acc = acc.mul(&Fixed::ratio(c.clone() + 1u32, c));
    }
    // log of the missing factors is <= sum_{n > p_max} 1/(n-1)^3 <= 1/(2 (p_max-1)^2)
    let m = (p_max - 1) as f64;
    let tail = acc.to_f64() * (1.0 / (2.0 * m * m)).exp_m1();
    Ok(ConstantEstimate::new("Cv_lower_bound", &acc, TruncationParam::PMax, p_max, Direction::Increasing, Some(tail)))
}

/// `c_k = 2^(k-1) prod_{3 <= p <= p_max} (1 - k_p/p) / (1 - 1/p)^k`, `k_p = min(k, ord_p(2))`.
pub fn ck_constant(k: u32, p_max: u64) -> Result<ConstantEstimate> {
    if k < 1 {
        return Err(Error::Domain("ck_constant needs k >= 1".into()));
    }
    let mut acc = Fixed::ratio(Integer::from(1) << (k - 1), 1);
    for p in odd_primes(p_max) {
        let kp = (k as u64).min(order_of_two(p)?);
        // (p - k_p) p^(k-1) / (p-1)^k
        let num = Integer::from(p - kp) * Integer::from(p).pow(k - 1);
        let den = Integer::from(p - 1).pow(k);
        acc = acc.mul(&Fixed::ratio(num, den));
    }
    let direction = match k {
        1 => Direction::Constant,
        // ord_p(2) >= 2, so every factor is (1 - 2/p)/(1 - 1/p)^2 < 1
        2 => Direction::Decreasing,
        _ => Direction::Oscillating,
    };
    Ok(ConstantEstimate::new(&format!("c{k}"), &acc, TruncationParam::PMax, p_max, direction, None))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaGamma {
    pub k: u32,
    pub beta: f64,
    pub gamma: f64,
    pub beta_decimal: String,
    pub gamma_decimal: String,
    /// `|tau (1 + log k - log tau) - (k - 1)|` at each root.
    pub beta_residual: f64,
    pub gamma_residual: f64,
}

impl BetaGamma {
    pub fn pair(&self) -> (f64, f64) {
        (self.beta, self.gamma)
    }
}

/// `g(tau) = tau (1 + log k - log tau) - (k - 1)` and `g'(tau) = log k - log tau`.
fn g(tau: &Fixed, k: i64, ln_k: &Fixed) -> (Fixed, Fixed) {
    let d = ln_k.sub(&tau.ln());
    let v = tau.mul(&Fixed::from_int(1).add(&d)).sub(&Fixed::from_int(k - 1));
    (v, d)
}

/// Newton on `[lo, hi]` where `g` changes sign, falling back to bisection
/// whenever a step leaves the bracket.
fn bracketed_newton(mut lo: Fixed, mut hi: Fixed, k: i64, ln_k: &Fixed) -> Fixed {
    let (g_lo, _) = g(&lo, k, ln_k);
    let lo_negative = !g_lo.is_positive();
    let tol = Fixed::ratio(1, Integer::from(1) << 200u32);
    let mut x = lo.add(&hi).div_int(2);
    for _ in 0..2000 {
        let (v, d) = g(&x, k, ln_k);
        if v.abs() <= tol {
            break;
        }
        if (!v.is_positive()) == lo_negative {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let mid = lo.add(&hi).div_int(2);
        x = if d == Fixed::zero() {
            mid
        } else {
            let step = x.sub(&v.div(&d));
            if step > lo && step < hi {
                step
            } else {
                mid
            }
        };
        if hi.sub(&lo) <= tol {
            break;
        }
    }
    x
}

/// The roots `beta_k < k < gamma_k` of `tau (1 + log k - log tau) = k - 1`.
pub fn beta_gamma(k: u32) -> Result<BetaGamma> {
    if k < 1 {
        return Err(Error::Domain("beta_gamma needs k >= 1".into()));
    }
    let ki = k as i64;
    let ln_k = Fixed::from_int(ki).ln();
    let (beta, gamma) = if k == 1 {
        // tau (1 - log tau) = 0
        (Fixed::zero(), Fixed::e())
    } else {
        // g(0+) = 1 - k < 0, g(k) = 1 > 0, g(e^2 k) = 1 - k - e^2 k < 0
        let tiny = Fixed::ratio(1, Integer::from(1) << 64u32);
        let beta = bracketed_newton(tiny, Fixed::from_int(ki), ki, &ln_k);
        let e = Fixed::e();
        let far = e.mul(&e).mul_int(ki);
        let gamma = bracketed_newton(Fixed::from_int(ki), far, ki, &ln_k);
        (beta, gamma)
    };
    let residual = |t: &Fixed| {
        if *t == Fixed::zero() {
            // the limit of tau log tau at 0
            (ki - 1) as f64
        } else {
            g(t, ki, &ln_k).0.abs().to_f64()
        }
    };
    Ok(BetaGamma {
        k,
        beta: beta.to_f64(),
        gamma: gamma.to_f64(),
        beta_decimal: beta.to_decimal(30),
        gamma_decimal: gamma.to_decimal(30),
        beta_residual: residual(&beta),
        gamma_residual: residual(&gamma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twin_small_and_large() {
        assert_eq!(twin_constant(3).unwrap().value_f64, 1.5);
        assert_eq!(twin_constant(5).unwrap().value_f64, 1.40625);
        let c = twin_constant(1_000_000).unwrap();
        assert!((c.value_f64 - 1.3203236316937391).abs() < 1e-6, "{}", c.value);
        assert!(twin_constant(2).is_err());
    }

    #[test]
    fn cv_partial_sums() {
        let c2 = twin_constant(CV_TWIN_PMAX).unwrap().value_f64;
        assert!((cv_constant(1).unwrap().value_f64 - c2).abs() < 1e-15);
        assert!((cv_constant(3).unwrap().value_f64 - 1.5 * c2).abs() < 1e-14);
        // d = 1, 3, 5, 7, 11, 13, 15 by hand: 1 + 1/2 + 1/12 + 1/15 + 1/90 + 1/132 + 1/12
        let hand = 1.0 + 0.5 + 1.0 / 12.0 + 1.0 / 15.0 + 1.0 / 90.0 + 1.0 / 132.0 + 1.0 / 12.0;
        assert!((cv_constant(15).unwrap().value_f64 - hand * c2).abs() < 1e-12);
        assert!(cv_constant(1000).unwrap().value_f64 > 2.30);
    }

    #[test]
    fn lower_bound() {
        assert_eq!(cv_lower_bound(2).unwrap().value_f64, 2.0);
        assert_eq!(cv_lower_bound(3).unwrap().value_f64, 2.25);
        let v = cv_lower_bound(1_000_000).unwrap();
        assert!((v.value_f64 - 2.3009615).abs() < 1e-6, "{}", v.value);
    }

    #[test]
    fn ck_values() {
        for p_max in [3, 10, 1000] {
            assert_eq!(ck_constant(1, p_max).unwrap().value_f64, 1.0);
        }
        let direct = 2.0 * ((1.0 / 3.0) / (4.0 / 9.0)) * ((3.0 / 5.0) / (16.0 / 25.0)) * ((5.0 / 7.0) / (36.0 / 49.0));
        assert!((ck_constant(2, 7).unwrap().value_f64 - direct).abs() < 1e-14);
        // p = 3 alone: k_3 = 2 for k >= 2, factor (1/3)/(2/3)^k
        for k in 2..6u32 {
            let want = 2f64.powi(k as i32 - 1) * (1.0 / 3.0) / (2.0f64 / 3.0).powi(k as i32);
            assert!((ck_constant(k, 3).unwrap().value_f64 - want).abs() < 1e-12);
        }
    }

    #[test]
    fn roots() {
        let b1 = beta_gamma(1).unwrap();
        assert_eq!(b1.beta, 0.0);
        assert!((b1.gamma - std::f64::consts::E).abs() < 1e-15);
        let b2 = beta_gamma(2).unwrap();
        assert!((b2.beta - 0.373365).abs() < 5e-7, "{}", b2.beta);
        assert!((b2.gamma - 4.31).abs() < 5e-3);
        let b3 = beta_gamma(3).unwrap();
        assert!((b3.beta - 0.914).abs() < 5e-4);
        assert!((b3.gamma - 5.764).abs() < 5e-4);
        for k in [2, 3, 7, 50] {
            let r = beta_gamma(k).unwrap();
            assert!(r.beta_residual < 1e-12 && r.gamma_residual < 1e-12);
            assert!(r.beta < k as f64 && (k as f64) < r.gamma);
        }
        let b50 = beta_gamma(50).unwrap();
        assert!((b50.beta - (50.0 - 100f64.sqrt() + 1.0 / 3.0)).abs() < 0.5);
    }

    #[test]
    fn scaled_matches_value() {
        let c = twin_constant(5).unwrap();
        assert_eq!(c.scaled(), Integer::from(140625) * Integer::from(10).pow(DIGITS - 5));
    }
}
