//! Dense integer polynomials, just enough for characteristic polynomials.

use std::fmt;

use num_complex::Complex64;
use rug::{Integer, Rational};

/// Polynomial with integer coefficients stored lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![Integer::from(1)] }
    }

    /// `T - r`
    pub fn linear_root(r: &Integer) -> Self {
        Self::new(vec![Integer::from(-r), Integer::from(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == 1)
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Evaluates at `x` modulo `m` (`m >= 1`).
    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        let m128 = m as u128;
        let mut acc: u128 = 0;
        for c in self.coeffs.iter().rev() {
            let cm = crate::arith::mod_u64(c, m) as u128;
            acc = (acc * x as u128 % m128 + cm) % m128;
        }
        acc as u64
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_f64();
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Integer::from(c * i as u64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        Self::new(out)
    }

    /// `f(x^q)`
    pub fn compose_power(&self, q: usize) -> IntPoly {
        assert!(q >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Integer::new(); (self.coeffs.len() - 1) * q + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * q] = c.clone();
        }
        Self::new(out)
    }

    /// Gcd of the coefficients.
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if *self.leading().unwrap() < 0 {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| Integer::from(c.div_exact_ref(&g))).collect())
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) * a mod d`.
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let t = r[top].clone();
            if t == 0 {
                r.pop();
                continue;
            }
            for c in r.iter_mut() {
                *c *= &lc;
            }
            let shift = top - dd;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[shift + j] -= Integer::from(&t * dc);
            }
            debug_assert_eq!(r[top], 0);
            r.pop();
        }
        Self::new(r)
    }

    /// Primitive gcd over `Q[x]`, normalised to positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Quotient by a divisor with unit leading coefficient, if the division is exact.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let lc = d.leading().unwrap();
        if *lc != 1 && *lc != -1 {
            return None;
        }
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return if self.is_zero() { Some(Self::zero()) } else { None };
        }
        let mut q = vec![Integer::new(); r.len() - dd];
        for top in (dd..r.len()).rev() {
            let t = Integer::from(&r[top] * lc);
            let shift = top - dd;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[shift + j] -= Integer::from(&t * dc);
            }
            q[shift] = t;
        }
        if r.iter().any(|c| *c != 0) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Least common multiple of two monic polynomials (monic).
    pub fn lcm_monic(&self, other: &IntPoly) -> IntPoly {
        debug_assert!(self.is_monic() && other.is_monic());
        let g = self.gcd(other);
        self.div_exact(&g)
            .expect("gcd of monic polynomials is monic")
            .mul(other)
    }

    /// All complex roots by Aberth-Ehrlich iteration.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let Some(n) = self.degree() else {
            return Vec::new();
        };
        if n == 0 {
            return Vec::new();
        }
        let lead = self.leading().unwrap().to_f64();
        let monic: Vec<f64> = self.coeffs.iter().map(|c| c.to_f64() / lead).collect();
        let eval = |z: Complex64| -> (Complex64, Complex64) {
            let mut p = Complex64::new(0.0, 0.0);
            let mut dp = Complex64::new(0.0, 0.0);
            for &c in monic.iter().rev() {
                dp = dp * z + p;
                p = p * z + c;
            }
            (p, dp)
        };
        // Cauchy bound for the starting circle.
        let bound = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let radius = bound.min(1e6).max(1e-3);
        let mut z: Vec<Complex64> = (0..n)
            .map(|i| {
                let angle = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / n as f64 + 0.4;
                Complex64::from_polar(radius, angle)
            })
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let (p, dp) = eval(z[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / dp;
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        let d = z[i] - z[j];
                        if d.norm() > 0.0 {
                            s += d.inv();
                        }
                    }
                }
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
                if step.is_finite() {
                    z[i] -= step;
                    moved = moved.max(step.norm() / z[i].norm().max(1.0));
                }
            }
            if moved < 1e-15 {
                break;
            }
        }
        z
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, abs == 1) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{abs}T")?,
                (_, true) => write!(f, "T^{i}")?,
                (_, false) => write!(f, "{abs}T^{i}")?,
            }
        }
        Ok(())
    }
}
