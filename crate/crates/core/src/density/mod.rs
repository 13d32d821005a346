//! Exact coprimality densities `delta_u(m)` and `delta_u(R_y)`, count predictions,
//! and the polynomial analogue `kappa_f`.
//!
//! `delta_u(R_y)` counts the `n` in one window of length `L_y` for which no support
//! prime divides `u_n`, and divides by what a random integer would give:
//!
//! ```text
//! delta = count * R_y / (L_y * phi(R_y))
//! ```

pub(crate) mod classes;
mod predict;

use rug::{Integer, Rational};
use serde::Serialize;

use crate::arith::{euler_phi, gcd_u64};
use crate::bigseq::LinearRecurrence;
use crate::moddyn::{forbidden_classes, period_mod, period_support, PeriodTable};
use crate::Result;

pub use classes::{count_inclusion_exclusion, count_reduced, count_sieve, ClassSet};
pub use predict::{kappa_f, mersenne_style_prediction, predict_count, root_count, KappaReport, EULER_GAMMA};

/// How the window count is obtained. All strategies give identical counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Bit-sieve over the full `L_y` window.
    Sieve,
    /// Signed sum over CRT-compatible class selections; small `y` only.
    InclusionExclusion,
    /// Factor out isolated prime powers of `L_y`, then sieve the remaining window.
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub y: u64,
    /// Number of allowed `n` in one window.
    pub coprime_count: u64,
    /// `L_y`
    pub window_length: u64,
    /// Primes of `R_y`.
    pub support: Vec<u64>,
    /// `phi(R_y) / R_y`
    #[serde(serialize_with = "rational_str")]
    pub phi_ratio: Rational,
    #[serde(serialize_with = "rational_str")]
    pub delta: Rational,
    pub strategy: Strategy,
}

fn rational_str<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl DensityReport {
    pub fn delta_f64(&self) -> f64 {
        self.delta.to_f64()
    }
}

/// Forbidden classes of every support prime, keyed by period.
pub fn class_set(rec: &LinearRecurrence, table: &PeriodTable) -> ClassSet {
    let mut set = ClassSet::new(table.l_y);
    for p in table.primes() {
        let fc = forbidden_classes(rec, p);
        set.forbid(fc.period, &fc.residues);
    }
    set
}

/// `prod (1 - 1/p)` over the given primes.
pub fn phi_ratio(primes: &[u64]) -> Rational {
    let mut r = Rational::from(1);
    for &p in primes {
        r *= Rational::from((p - 1, p));
    }
    r
}

pub fn delta(rec: &LinearRecurrence, y: u64) -> Result<DensityReport> {
    delta_with(rec, y, Strategy::Reduced)
}

pub fn delta_with(rec: &LinearRecurrence, y: u64, strategy: Strategy) -> Result<DensityReport> {
    let table = period_support(rec, y)?;
    Ok(delta_from_table(rec, &table, strategy))
}

pub fn delta_from_table(rec: &LinearRecurrence, table: &PeriodTable, strategy: Strategy) -> DensityReport {
    let set = class_set(rec, table);
    let count = match strategy {
        Strategy::Sieve => count_sieve(&set),
        Strategy::InclusionExclusion => count_inclusion_exclusion(&set),
        Strategy::Reduced => count_reduced(&set),
    };
    let support = table.primes();
    let phi = phi_ratio(&support);
    let delta = Rational::from((Integer::from(count), Integer::from(table.l_y))) / &phi;
    DensityReport {
        y: table.y,
        coprime_count: count,
        window_length: table.l_y,
        support,
        phi_ratio: phi,
        delta,
        strategy,
    }
}

/// `Prob(gcd(u_n, m) = 1)` over one period past the preperiod, divided by `phi(m)/m`.
pub fn delta_mod(rec: &LinearRecurrence, m: u64) -> Rational {
    assert!(m >= 2, "delta_mod needs m >= 2");
    let r = period_mod(rec, m);
    let mut st = crate::moddyn::ModStepper::new(rec, m);
    for _ in 0..r.preperiod {
        st.advance();
    }
    let coprime = (0..r.period).filter(|_| gcd_u64(st.next().unwrap(), m) == 1).count() as u64;
    let prob = Rational::from((coprime, r.period));
    prob / Rational::from((euler_phi(m), m))
}

/// `prod p/(p-1)` over primes `p > y` with `ord_p(2) <= y`: the closed form of
/// `delta(2^n - 1, y)`, which diverges as `y` grows.
pub fn mersenne_divergence_product(table: &PeriodTable) -> Rational {
    let mut r = Rational::from(1);
    for p in table.primes() {
        if p > table.y {
            r *= Rational::from((p, p - 1));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(a: i64, b: i64) -> LinearRecurrence {
        LinearRecurrence::geometric_shift(a, b).unwrap()
    }

    #[test]
    fn delta_mod_examples() {
        assert_eq!(delta_mod(&geom(1, -7), 15), Rational::from((15, 32)));
        assert_eq!(delta_mod(&geom(1, 7), 15), Rational::from((15, 16)));
        assert_eq!(delta_mod(&geom(1, 3), 3), Rational::from((3, 2)));
    }

    #[test]
    fn hand_checked_small_y() {
        let r = delta(&geom(1, 3), 5).unwrap();
        assert_eq!(r.coprime_count, 30);
        assert_eq!(r.window_length, 60);
        assert!((r.delta_f64() - 2.2604).abs() < 1e-3, "{}", r.delta_f64());
        let f = delta(&geom(1, 1), 2).unwrap();
        assert_eq!(f.delta, Rational::from((3, 2)));
        let t = delta(&geom(3, 5), 5).unwrap();
        assert!((t.delta_f64() - 4.52).abs() < 0.005, "{}", t.delta_f64());
    }

    #[test]
    fn mersenne_delta_closed_form() {
        let m = geom(1, -1);
        for y in 2..=12 {
            let t = period_support(&m, y).unwrap();
            let d = delta_from_table(&m, &t, Strategy::Reduced);
            assert_eq!(d.delta, mersenne_divergence_product(&t), "y = {y}");
        }
        // grows without bound, slowly
        let d12 = delta(&m, 12).unwrap().delta_f64();
        assert!(d12 > delta(&m, 3).unwrap().delta_f64());
    }

    #[test]
    fn strategies_agree_small_y() {
        for (a, b) in [(1, 3), (1, -3), (3, 5), (1, -7)] {
            for y in [4, 7, 10] {
                let s = delta_with(&geom(a, b), y, Strategy::Sieve).unwrap();
                let ie = delta_with(&geom(a, b), y, Strategy::InclusionExclusion).unwrap();
                let rd = delta_with(&geom(a, b), y, Strategy::Reduced).unwrap();
                assert_eq!(s.delta, ie.delta);
                assert_eq!(s.delta, rd.delta);
            }
        }
    }
}
