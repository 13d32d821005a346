//! Primality testing, trial division, factorization and arithmetic functions.

mod cache;
mod ecm;
mod factor;
mod functions;
mod prp;
mod rho;
mod trial;

pub use cache::FactorCache;
pub use factor::{factorize, FactorEffort, FactorizationResult};
pub use functions::{
    carmichael_lambda, divisors, euler_phi, factor_u64, moebius, omega_big, omega_p, phi2,
    primes_up_to, tau,
};
#[allow(unused_imports)]
pub(crate) use functions::{gcd_u64, lcm_u64, mod_u64, mul_mod, pow_mod};
pub use prp::{
    is_prime_u64, is_probable_prime, strong_probable_prime, Evidence, PrpPolicy, ProofMethod, Verdict,
};
pub use trial::{trial_division, KpOne, TrialConfig, TrialFactor};
