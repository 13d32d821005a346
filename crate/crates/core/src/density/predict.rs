use serde::Serialize;

use super::delta;
use crate::arith::primes_up_to;
use crate::bigseq::LinearRecurrence;
use crate::poly::IntPoly;
use crate::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `delta(rec, y) * log N / log alpha_1`.
pub fn predict_count(rec: &LinearRecurrence, n_max: f64, y: u64) -> Result<f64> {
    let alpha = rec.char_poly().dominant_root;
    if alpha <= 1.0 {
        return Err(Error::NotExponentiallyGrowing { root: alpha });
    }
    let d = delta(rec, y)?.delta_f64();
    Ok(d * n_max.ln() / alpha.ln())
}

/// `e^gamma * log N / log alpha`, the prediction for division sequences.
pub fn mersenne_style_prediction(n_max: f64, alpha: f64) -> f64 {
    EULER_GAMMA.exp() * n_max.ln() / alpha.ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaReport {
    pub y: u64,
    pub value: f64,
    /// A prime dividing every value of the polynomial, if one was met.
    pub fixed_divisor: Option<u64>,
}

/// `prod_{p <= y} (p - omega(p)) / (p - 1)` with `omega(p)` the number of roots mod `p`.
pub fn kappa_f(poly: &IntPoly, y: u64) -> KappaReport {
    let mut value = 1.0f64;
    for p in primes_up_to(y) {
        let omega = root_count(poly, p);
        if omega == p {
            return KappaReport { y, value: 0.0, fixed_divisor: Some(p) };
        }
        value *= (p - omega) as f64 / (p - 1) as f64;
    }
    KappaReport { y, value, fixed_divisor: None }
}

/// Number of roots of `poly` modulo `p`.
pub fn root_count(poly: &IntPoly, p: u64) -> u64 {
    (0..p).filter(|&n| poly.eval_mod(n, p) == 0).count() as u64
}
