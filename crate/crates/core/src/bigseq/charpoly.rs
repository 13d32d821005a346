use rug::{Integer, Rational};
use serde::Serialize;

use crate::poly::IntPoly;

/// Characteristic polynomial with an estimate of its largest root modulus.
#[derive(Clone, Debug, Serialize)]
pub struct CharPoly {
    #[serde(serialize_with = "poly_as_string")]
    pub poly: IntPoly,
    /// `|alpha_1|`
    pub dominant_root: f64,
    /// Absolute error bound on `dominant_root`; zero when the root is an integer.
    pub error_bound: f64,
    #[serde(skip)]
    pub exact_root: Option<Integer>,
}

fn poly_as_string<S: serde::Serializer>(p: &IntPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

const TARGET: f64 = 1e-9;

impl CharPoly {
    pub fn new(poly: IntPoly) -> Self {
        let roots = poly.complex_roots();
        let Some(top) = roots.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) else {
            return CharPoly { poly, dominant_root: 0.0, error_bound: 0.0, exact_root: None };
        };
        let modulus = top.norm();

        // exact integer root of maximal modulus
        for cand in [modulus.round(), -modulus.round()] {
            if (cand.abs() - modulus).abs() < 1e-6 && cand.abs() < 9.0e15 {
                let c = Integer::from(cand as i64);
                if poly.eval(&c) == 0 {
                    return CharPoly {
                        poly,
                        dominant_root: cand.abs(),
                        error_bound: 0.0,
                        exact_root: Some(c),
                    };
                }
            }
        }

        // real root of maximal modulus: bracket it and bisect with exact sign tests
        for cand in [modulus, -modulus] {
            if let Some((lo, hi)) = refine_real_root(&poly, cand) {
                let mid = 0.5 * (lo + hi);
                return CharPoly {
                    poly,
                    dominant_root: mid.abs(),
                    error_bound: 0.5 * (hi - lo),
                    exact_root: None,
                };
            }
        }

        // complex pair: Newton correction size as the error estimate
        let deriv = poly.derivative();
        let fz = poly.eval_complex(top);
        let dfz = deriv.eval_complex(top);
        let step = if dfz.norm() > 0.0 { (fz / dfz).norm() } else { f64::INFINITY };
        let degree = poly.degree().unwrap_or(1) as f64;
        CharPoly {
            poly,
            dominant_root: modulus,
            error_bound: (degree * step).max(modulus * 1e-15),
            exact_root: None,
        }
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    /// True if `terms` satisfies the recurrence encoded by this polynomial throughout.
    pub fn annihilates(&self, terms: &[Integer]) -> bool {
        let c = self.poly.coeffs();
        let k = self.degree();
        if terms.len() <= k {
            return true;
        }
        terms.windows(k + 1).all(|w| {
            let s = w
                .iter()
                .zip(c)
                .fold(Integer::new(), |acc, (u, a)| acc + Integer::from(u * a));
            s == 0
        })
    }
}

/// Bisects a sign change of `poly` around `x` down to width `2*TARGET`.
fn refine_real_root(poly: &IntPoly, x: f64) -> Option<(f64, f64)> {
    let sign_at = |t: f64| -> Option<std::cmp::Ordering> {
        let r = Rational::from_f64(t)?;
        Some(poly.eval_rational(&r).cmp0())
    };
    let mut width = (x.abs() * 1e-7).max(1e-7);
    let (mut lo, mut hi) = (x - width, x + width);
    let mut found = false;
    for _ in 0..8 {
        if sign_at(lo)? != sign_at(hi)? {
            found = true;
            break;
        }
        width *= 4.0;
        lo = x - width;
        hi = x + width;
    }
    if !found {
        return None;
    }
    let s_lo = sign_at(lo)?;
    while hi - lo > 2.0 * TARGET * 0.5 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = sign_at(mid)?;
        if s == std::cmp::Ordering::Equal {
            return Some((mid, mid));
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigseq::LinearRecurrence;

    #[test]
    fn integer_dominant_root_is_exact() {
        let cp = LinearRecurrence::geometric_shift(3, 5).unwrap().char_poly();
        assert_eq!(cp.dominant_root, 2.0);
        assert_eq!(cp.error_bound, 0.0);
        assert_eq!(cp.exact_root, Some(Integer::from(2)));
    }

    #[test]
    fn golden_ratio_within_tolerance() {
        let cp = LinearRecurrence::fibonacci_shift(3).char_poly();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((cp.dominant_root - phi).abs() <= 1e-9);
        assert!(cp.error_bound <= 1e-9);
    }

    #[test]
    fn interleaved_roots_have_equal_modulus() {
        let u = LinearRecurrence::combine(vec![
            LinearRecurrence::mersenne(),
            LinearRecurrence::geometric_shift(1, 1).unwrap(),
        ])
        .unwrap();
        let cp = u.char_poly();
        assert!((cp.dominant_root - 2f64.sqrt()).abs() < 1e-9, "{}", cp.dominant_root);
    }

    #[test]
    fn annihilates_own_terms() {
        let r = LinearRecurrence::from_i64(&[1, 1, 1], &[0, 0, 1]).unwrap();
        let terms: Vec<_> = r.terms().take(9).collect();
        assert!(r.char_poly().annihilates(&terms));
        let mut broken = terms.clone();
        broken[7] += 1;
        assert!(!r.char_poly().annihilates(&broken));
    }
}
