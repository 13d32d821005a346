use std::time::{Duration, Instant};

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::constants::cv_constant;
use crate::bigseq::LinearRecurrence;
use crate::census::{census, CensusPolicy};
use crate::{Error, Result};

/// `d_max` used for the `C_v` factor of the second-moment prediction.
pub const MOMENT_CV_DMAX: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub n_max: u64,
    pub b_max: u64,
    pub k: u32,
    /// `(b, Pi_{1,b}(N))` for odd `3 <= b <= B`, ascending.
    pub counts: Vec<(u64, u64)>,
    /// `(1/B) sum_b Pi_{1,b}(N)^k`, exact.
    pub moment: Rational,
    pub empirical: f64,
    /// `(log_2 N)^k`, times `C_v` when `k = 2`; none for larger `k`.
    pub predicted: Option<f64>,
    pub partial: bool,
    /// Largest `b` with every smaller odd `b` done, when partial.
    pub completed_through: Option<u64>,
}

impl MomentReport {
    /// `(1/B) sum_b Pi_{1,b}(N)^j` from the retained counts.
    pub fn moment_of(&self, j: u32) -> Rational {
        let sum = self
            .counts
            .iter()
            .fold(Integer::new(), |acc, &(_, c)| acc + Integer::from(c).pow(j));
        Rational::from((sum, Integer::from(self.b_max)))
    }

    /// `a_b = Pi_{1,b}(N) / log_2 N`.
    pub fn normalized(&self) -> Vec<(u64, f64)> {
        let l = (self.n_max as f64).log2();
        self.counts.iter().map(|&(b, c)| (b, c as f64 / l)).collect()
    }
}

pub fn empirical_moments(n_max: u64, b_max: u64, k: u32, policy: &CensusPolicy) -> Result<MomentReport> {
    empirical_moments_with(n_max, b_max, k, policy, None)
}

/// Censuses `2^n + b` for odd `3 <= b <= B` and aggregates the `k`-th moment.
///
/// With a budget, `b` values not started before it runs out are dropped and the
/// report is marked partial.
pub fn empirical_moments_with(
    n_max: u64,
    b_max: u64,
    k: u32,
    policy: &CensusPolicy,
    budget: Option<Duration>,
) -> Result<MomentReport> {
    if n_max < 2 || k < 1 {
        return Err(Error::Domain(format!("moments need N >= 2 and k >= 1, got N = {n_max}, k = {k}")));
    }
    let start = Instant::now();
    let bs: Vec<u64> = (3..=b_max).step_by(2).collect();
    let inner = CensusPolicy { threads: None, log: None, ..policy.clone() };
    let run = || -> Result<Vec<Option<(u64, u64)>>> {
        bs.par_iter()
            .map(|&b| {
                if budget.is_some_and(|d| start.elapsed() > d) {
                    return Ok(None);
                }
                let rec = LinearRecurrence::geometric_shift(1, b)?;
                let rep = census(&rec, n_max, &inner)?;
                ::log::debug!("moments b={b} count={}", rep.count());
                Ok(Some((b, rep.count() as u64)))
            })
            .collect()
    };
    let done = match policy.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let partial = done.iter().any(Option::is_none);
    let completed_through = if partial {
        let first_missing = done.iter().position(Option::is_none).unwrap();
        Some(if first_missing == 0 { 1 } else { bs[first_missing - 1] })
    } else {
        None
    };
    let counts: Vec<(u64, u64)> = done.into_iter().flatten().collect();
    let l = (n_max as f64).log2();
    let predicted = match k {
        1 => Some(l),
        2 => Some(cv_constant(MOMENT_CV_DMAX)?.value_f64 * l * l),
        _ => None,
    };
    let mut rep = MomentReport {
        n_max,
        b_max,
        k,
        counts,
        moment: Rational::new(),
        empirical: 0.0,
        predicted,
        partial,
        completed_through,
    };
    rep.moment = rep.moment_of(k);
    rep.empirical = rep.moment.to_f64();
    Ok(rep)
}
