//! Numeric constants and statistical experiments around prime counts in recurrences.

mod constants;
mod fixed;
mod moments;
mod omega;
mod sieve;

pub use constants::{
    beta_gamma, ck_constant, cv_constant, cv_constant_with, cv_lower_bound, twin_constant, BetaGamma,
    ConstantEstimate, Direction, Truncation, TruncationParam, CV_TWIN_PMAX, DIGITS,
};
pub use fixed::Fixed;
pub use moments::{empirical_moments, empirical_moments_with, MomentReport, MOMENT_CV_DMAX};
pub use omega::{
    compare_conventions, mean_omega_experiment, mean_omega_experiment_with, OmegaConfig, OmegaFixture, OmegaReport,
    OmegaTerm, PredictionKind, RangeConvention, OMEGA_FIXTURES,
};
pub use sieve::{eta_sum, eta_sum_over, sieve_identity_check, SieveIdentity};
