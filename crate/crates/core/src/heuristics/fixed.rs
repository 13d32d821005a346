//! Binary fixed point with 256 fractional bits, enough for every constant here.

use std::cmp::Ordering;
use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

pub(crate) const PREC: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(Integer);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(Integer::new())
    }

    pub fn from_int(n: i64) -> Self {
        Fixed(Integer::from(n) << PREC)
    }

    /// `num / den`, truncated toward zero.
    pub fn ratio(num: impl Into<Integer>, den: impl Into<Integer>) -> Self {
        let num: Integer = num.into();
        let den: Integer = den.into();
        assert!(den != 0, "zero denominator");
        Fixed((num << PREC) / den)
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::ratio(r.numer().clone(), r.denom().clone())
    }

    /// Nearest representable value to a float (exact for dyadic inputs).
    pub fn from_f64(x: f64) -> Self {
        let r = Rational::from_f64(x).expect("finite float");
        Self::from_rational(&r)
    }

    pub fn raw(&self) -> &Integer {
        &self.0
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(Integer::from(&self.0 + &o.0))
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(Integer::from(&self.0 - &o.0))
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed(Integer::from(&self.0 * &o.0) >> PREC)
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        assert!(o.0 != 0, "division by zero");
        Fixed(Integer::from(&self.0 << PREC) / &o.0)
    }

    pub fn mul_int(&self, n: i64) -> Fixed {
        Fixed(Integer::from(&self.0 * n))
    }

    pub fn div_int(&self, n: i64) -> Fixed {
        Fixed(Integer::from(&self.0 / n))
    }

    pub fn is_positive(&self) -> bool {
        self.0 > 0
    }

    pub fn abs(&self) -> Fixed {
        Fixed(Integer::from(self.0.abs_ref()))
    }

    pub fn to_f64(&self) -> f64 {
        Rational::from((self.0.clone(), Integer::from(1) << PREC)).to_f64()
    }

    /// Decimal expansion with `digits` places, truncated.
    pub fn to_decimal(&self, digits: u32) -> String {
        let neg = self.0 < 0;
        let abs = Integer::from(self.0.abs_ref());
        let scaled: Integer = (abs * Integer::from(10).pow(digits)) >> PREC;
        let s = scaled.to_string();
        let s = format!("{:0>width$}", s, width = digits as usize + 1);
        let (int, frac) = s.split_at(s.len() - digits as usize);
        format!("{}{int}.{frac}", if neg { "-" } else { "" })
    }

    /// `atanh(z)` for `|z| <= 1/2`, by its odd power series.
    fn atanh_small(z: &Fixed) -> Fixed {
        let z2 = z.mul(z);
        let mut term = z.clone();
        let mut sum = Fixed::zero();
        let mut k = 1i64;
        while term.0 != 0 {
            sum = sum.add(&term.div_int(k));
            term = term.mul(&z2);
            k += 2;
        }
        sum
    }

    pub fn ln2() -> Fixed {
        Self::atanh_small(&Fixed::ratio(1, 3)).mul_int(2)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Fixed {
        assert!(self.is_positive(), "ln of non-positive value");
        // x = m * 2^e with m in [1, 2)
        let e = self.0.significant_bits() as i64 - 1 - PREC as i64;
        let m = if e >= 0 { Fixed(Integer::from(&self.0 >> e as u32)) } else { Fixed(Integer::from(&self.0 << (-e) as u32)) };
        let one = Fixed::from_int(1);
        let z = m.sub(&one).div(&m.add(&one));
        Self::atanh_small(&z).mul_int(2).add(&Self::ln2().mul_int(e))
    }

    /// `e = sum 1/n!`.
    pub fn e() -> Fixed {
        let mut term = Fixed::from_int(1);
        let mut sum = Fixed::zero();
        let mut n = 1i64;
        while term.0 != 0 {
            sum = sum.add(&term);
            term = term.div_int(n);
            n += 1;
        }
        sum
    }

    pub fn sqrt(&self) -> Fixed {
        assert!(self.0 >= 0);
        Fixed(Integer::from(&self.0 << PREC).sqrt())
    }
}

impl PartialOrd<i64> for Fixed {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Fixed::from_int(*other)))
    }
}

impl PartialEq<i64> for Fixed {
    fn eq(&self, other: &i64) -> bool {
        *self == Fixed::from_int(*other)
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(f.precision().unwrap_or(30) as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logs_and_e() {
        assert!(Fixed::ln2().to_decimal(30).starts_with("0.693147180559945309417232121458"));
        assert!(Fixed::e().to_decimal(30).starts_with("2.718281828459045235360287471352"));
        let ln10 = Fixed::from_int(10).ln();
        assert!(ln10.to_decimal(25).starts_with("2.3025850929940456840179914"));
        let small = Fixed::ratio(1, 1000).ln();
        assert!((small.to_f64() + 6.907755278982137).abs() < 1e-14);
        assert_eq!(Fixed::from_int(1).ln(), Fixed::zero());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Fixed::ratio(3, 2).to_decimal(3), "1.500");
        assert_eq!(Fixed::ratio(-1, 8).to_decimal(4), "-0.1250");
        assert_eq!(Fixed::ratio(1, 3).to_decimal(5), "0.33333");
        assert!(Fixed::from_int(2).sqrt().to_decimal(20).starts_with("1.41421356237309504880"));
    }
}
