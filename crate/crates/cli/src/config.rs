use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "recprimes", version, about = "Primes in linear recurrence sequences")]
pub struct Cli {
    /// Run the command stored in a RunConfig JSON file (as embedded in JSON reports).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub common: Common,

    /// Suppress heartbeat lines on stderr.
    #[arg(short, long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Common {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long = "out", value_enum, global = true, default_value_t = Format::Table)]
    #[serde(default)]
    pub out: Format,

    /// Cache directory for factorizations; RECPRIMES_CACHE takes precedence.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Table,
}

/// Everything needed to reproduce one invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Count and list prime terms u_n, 1 <= n <= N.
    Census(CensusArgs),
    /// Coprimality density delta_u(R_y).
    Delta {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        y: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Reduced)]
        #[serde(default)]
        strategy: StrategyArg,
    },
    /// Predicted prime count delta(R_y) log_alpha N.
    Predict {
        #[arg(long)]
        seq: String,
        #[arg(long = "N")]
        #[serde(rename = "N")]
        n: u64,
        #[arg(long, default_value_t = 20)]
        y: u64,
    },
    /// Covering-system verification.
    #[command(subcommand)]
    Covering(CoveringCommand),
    /// Truncated constants: twin prime, variance, its lower bound, c_k, beta/gamma.
    Constants {
        #[arg(value_enum)]
        which: ConstantKind,
        /// p_max (c2, cvlb, ck), d_max (cv) or k (beta).
        #[arg(long)]
        param: u64,
        /// k for `ck`.
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Empirical moments of Pi_{1,b}(N) over odd 3 <= b <= B.
    Moments {
        #[arg(long = "N")]
        #[serde(rename = "N")]
        n: u64,
        #[arg(long = "B")]
        #[serde(rename = "B")]
        b: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Stop starting new b after this many seconds; the report is then partial.
        #[arg(long)]
        budget_seconds: Option<f64>,
    },
    /// Mean of Omega(u_n) against its prediction.
    OmegaStats {
        #[arg(long)]
        seq: String,
        #[arg(long = "N")]
        #[serde(rename = "N")]
        n: u64,
        #[arg(long, value_enum, default_value_t = RangeArg::Dyadic)]
        range: RangeArg,
        /// Additive offset to log N for non-division sequences.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        #[serde(default)]
        offset: f64,
    },
    /// Roots beta_k < k < gamma_k of tau (1 + log k - log tau) = k - 1.
    Beta {
        #[arg(long)]
        k: u32,
    },
    /// Compare a census against a b-file of prime indices.
    Crosscheck {
        #[arg(long)]
        seq: String,
        #[arg(long = "N")]
        #[serde(rename = "N")]
        n: u64,
        #[arg(long, value_name = "FILE")]
        bfile: PathBuf,
        #[command(flatten)]
        #[serde(default)]
        policy: PolicyArgs,
    },
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    /// Also count n with u_n < 0 and |u_n| prime.
    #[arg(long)]
    #[serde(default)]
    pub abs: bool,
    /// Verdict log to replay and extend.
    #[arg(long, value_name = "FILE")]
    pub resume: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PruneArg::None)]
    #[serde(default)]
    pub prune: PruneArg,
    /// n_0 for `--prune division`.
    #[arg(long)]
    pub n0: Option<u64>,
    /// Second sequence for a simultaneous census.
    #[arg(long)]
    pub with: Option<String>,
    #[command(flatten)]
    #[serde(default)]
    pub policy: PolicyArgs,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PolicyArgs {
    /// Largest sieving prime (0 disables the sieve).
    #[arg(long)]
    pub sieve_bound: Option<u64>,
    #[arg(long)]
    pub prp_seed: Option<u64>,
    #[arg(long)]
    pub prp_rounds: Option<u32>,
    /// k limit for kp + 1 trial divisors.
    #[arg(long)]
    pub kp_k_max: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneArg {
    #[default]
    None,
    /// Prime n only, for division sequences.
    Division,
    /// n = p^m, for 2^n + 1 and repunit ratios.
    PrimePower,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    Sieve,
    InclusionExclusion,
    #[default]
    Reduced,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeArg {
    Upto,
    Dyadic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantKind {
    C2,
    Cv,
    Cvlb,
    Ck,
    Beta,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
pub enum CoveringCommand {
    /// Check a shipped system by name, or a prime set against a sequence.
    Verify {
        /// selfridge, riesel, brier-plus, brier-minus, fibonacci-93687, fibonacci-103377
        #[arg(long, conflicts_with_all = ["seq", "primes"])]
        name: Option<String>,
        #[arg(long, requires = "primes")]
        seq: Option<String>,
        #[arg(long, value_delimiter = ',')]
        #[serde(default)]
        primes: Vec<u64>,
    },
    /// The 2^64 - 1 construction a*2^n + b.
    Erdos {
        /// Multiplier a (default 1).
        #[arg(long)]
        a: Option<String>,
        /// Check this b instead of constructing one.
        #[arg(long)]
        b: Option<String>,
    },
    /// b = a * r mod 312018 for the Fibonacci covering.
    Fibonacci {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
}
