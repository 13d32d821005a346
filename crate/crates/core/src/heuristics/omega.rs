use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, omega_big, FactorCache, FactorEffort, FactorizationResult};
use crate::bigseq::{phi_decomposition, LinearRecurrence};
use crate::{Error, Result};

/// Which indices enter the mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeConvention {
    /// `1 <= n <= N`
    UpTo,
    /// `N < n <= 2N`
    Dyadic,
}

impl RangeConvention {
    pub fn indices(self, n_max: u64) -> std::ops::RangeInclusive<u64> {
        match self {
            RangeConvention::UpTo => 1..=n_max,
            RangeConvention::Dyadic => n_max + 1..=2 * n_max,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionKind {
    /// `(log N)^2 / 2`, for strong division sequences.
    HalfLogSquared,
    /// `log N + offset`.
    LogPlusOffset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaTerm {
    pub n: u64,
    pub omega: u32,
    /// False when a cofactor was left unsplit; `omega` is then a lower bound.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub spec: String,
    pub n_max: u64,
    pub range: RangeConvention,
    pub terms: Vec<OmegaTerm>,
    pub observed_mean: f64,
    pub prediction: f64,
    pub prediction_kind: PredictionKind,
    /// Some factorization stopped early, so `observed_mean` is a lower bound.
    pub lower_bound: bool,
}

impl OmegaReport {
    pub fn omega_sum(&self) -> u64 {
        self.terms.iter().map(|t| t.omega as u64).sum()
    }
}

/// Published means and predictions, kept for comparison only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OmegaFixture {
    pub spec: &'static str,
    pub n_max: u64,
    pub mean: f64,
    pub prediction: f64,
}

pub const OMEGA_FIXTURES: [OmegaFixture; 4] = [
    OmegaFixture { spec: "geom:1,-3", n_max: 50, mean: 3.48, prediction: 3.08 },
    OmegaFixture { spec: "geom:1,-3", n_max: 100, mean: 4.07, prediction: 3.77 },
    OmegaFixture { spec: "geom:1,-1", n_max: 50, mean: 6.28, prediction: 7.65 },
    OmegaFixture { spec: "geom:1,-1", n_max: 100, mean: 8.16, prediction: 10.60 },
];

pub struct OmegaConfig<'a> {
    pub effort: FactorEffort,
    pub cache: Option<&'a FactorCache>,
    /// Added to `log N` for sequences that are not division sequences.
    pub offset: f64,
}

impl Default for OmegaConfig<'_> {
    fn default() -> Self {
        OmegaConfig { effort: FactorEffort::default(), cache: None, offset: 0.0 }
    }
}

fn factor(n: &Integer, cfg: &OmegaConfig) -> Result<FactorizationResult> {
    match cfg.cache {
        Some(c) => c.factorize(n, &cfg.effort),
        None => Ok(factorize(n, &cfg.effort)),
    }
}

pub fn mean_omega_experiment(rec: &LinearRecurrence, n_max: u64, range: RangeConvention) -> Result<OmegaReport> {
    mean_omega_experiment_with(rec, n_max, range, &OmegaConfig::default())
}

/// Mean of `Omega(|u_n|)` over the chosen range.
///
/// Division sequences are factored piecewise: `Omega(x_n) = sum_{d | n} Omega(phi_d)`.
pub fn mean_omega_experiment_with(
    rec: &LinearRecurrence,
    n_max: u64,
    range: RangeConvention,
    cfg: &OmegaConfig,
) -> Result<OmegaReport> {
    if n_max < 1 {
        return Err(Error::Domain("omega experiment needs N >= 1".into()));
    }
    let indices: Vec<u64> = range.indices(n_max).collect();
    let division = rec.is_division_sequence();
    let terms: Vec<OmegaTerm> = if division {
        let mut ds: Vec<u64> = indices.iter().flat_map(|&n| divisors(n)).collect();
        ds.sort_unstable();
        ds.dedup();
        let pieces: Vec<(u64, u32, bool)> = ds
            .par_iter()
            .map(|&d| {
                let phi = phi_decomposition(rec, d)?;
                let f = factor(&phi, cfg)?;
                Ok((d, omega_big(&f), f.is_complete()))
            })
            .collect::<Result<_>>()?;
        let table: BTreeMap<u64, (u32, bool)> = pieces.into_iter().map(|(d, o, c)| (d, (o, c))).collect();
        indices
            .iter()
            .map(|&n| {
                let (omega, complete) = divisors(n)
                    .into_iter()
                    .map(|d| table[&d])
                    .fold((0, true), |(o, c), (o2, c2)| (o + o2, c && c2));
                OmegaTerm { n, omega, complete }
            })
            .collect()
    } else {
        indices
            .par_iter()
            .map(|&n| {
                let u = rec.term(n);
                if u == 0 {
                    return Err(Error::Domain(format!("u_{n} = 0 has no finite Omega")));
                }
                let f = factor(&u, cfg)?;
                Ok(OmegaTerm { n, omega: omega_big(&f), complete: f.is_complete() })
            })
            .collect::<Result<_>>()?
    };
    let sum: u64 = terms.iter().map(|t| t.omega as u64).sum();
    let observed_mean = sum as f64 / terms.len() as f64;
    let log_n = (n_max as f64).ln();
    let (prediction, prediction_kind) = if division {
        (0.5 * log_n * log_n, PredictionKind::HalfLogSquared)
    } else {
        (log_n + cfg.offset, PredictionKind::LogPlusOffset)
    };
    Ok(OmegaReport {
        spec: rec.to_string(),
        n_max,
        range,
        lower_bound: terms.iter().any(|t| !t.complete),
        terms,
        observed_mean,
        prediction,
        prediction_kind,
    })
}

/// Both range conventions against a target mean; the flag marks agreement within `tol`.
pub fn compare_conventions(
    rec: &LinearRecurrence,
    n_max: u64,
    target: f64,
    tol: f64,
    cfg: &OmegaConfig,
) -> Result<Vec<(OmegaReport, bool)>> {
    [RangeConvention::UpTo, RangeConvention::Dyadic]
        .into_iter()
        .map(|r| {
            let rep = mean_omega_experiment_with(rec, n_max, r, cfg)?;
            let ok = (rep.observed_mean - target).abs() <= tol;
            Ok((rep, ok))
        })
        .collect()
}
