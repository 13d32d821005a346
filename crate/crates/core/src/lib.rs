//! Primes in exponentially growing integer linear recurrence sequences.
//!
//! The crate is organised by subsystem:
//!
//! * [`bigseq`] builds and evaluates recurrences exactly (Mersenne numbers,
//!   `a*2^n+b`, Lucas sequences, Fibonacci shifts, repunit ratios, interleaved
//!   combinations) and parses the compact sequence grammar used by the CLI.
//! * [`moddyn`] studies sequences modulo `m`: periods, multiplicative orders,
//!   forbidden residue classes and the period-ordered prime supports `R_y`.
//! * [`density`] turns supports into exact coprimality densities and
//!   predictions for prime counts.
//! * [`arith`] is the big-integer toolbox: probable-prime tests, trial
//!   division, factorisation and multiplicative functions.
//! * [`census`] counts prime terms with sieving, checkpoints and resumable logs.
//! * [`covering`] verifies covering systems that force every term composite.
//! * [`heuristics`] computes the numeric constants and statistical experiments.

pub mod arith;
pub mod bigseq;
pub mod census;
pub mod covering;
pub mod density;
mod error;
pub mod heuristics;
pub mod moddyn;
pub mod poly;

pub use error::{Error, Result};

pub use arith::{FactorizationResult, PrpPolicy, Verdict};
pub use bigseq::{CharPoly, Family, LinearRecurrence};
pub use census::{CensusPolicy, CensusReport};
pub use covering::CoveringSystem;
pub use density::DensityReport;
pub use moddyn::{ForbiddenClasses, PeriodRecord, PeriodTable};

/// Re-exported so downstream crates can name big integers without a direct `rug` dependency.
pub use rug::{Integer, Rational};
