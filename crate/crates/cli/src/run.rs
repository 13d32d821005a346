use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use recprimes::arith::{FactorCache, PrpPolicy};
use recprimes::census::{
    bfile_indices, census, crosscheck, division_seq_census, parse_bfile, prime_power_census, simultaneous_census,
};
use recprimes::covering::{
    erdos_check, erdos_construction, fibonacci_covering_check, named_covering, verify_sequence_covering,
    CoveringSystem,
};
use recprimes::density::{delta_with, predict_count, Strategy};
use recprimes::heuristics::{
    beta_gamma, ck_constant, cv_constant, cv_lower_bound, empirical_moments_with, mean_omega_experiment_with,
    twin_constant, ConstantEstimate, OmegaConfig, RangeConvention,
};
use recprimes::{CensusPolicy, CensusReport, Integer, LinearRecurrence};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::*;

/// One result in every output format.
pub struct Rendered {
    pub json: Value,
    pub csv: String,
    pub table: String,
}

impl Rendered {
    pub fn select(&self, f: Format) -> String {
        match f {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
            Format::Table => self.table.clone(),
        }
    }
}

fn seq(s: &str) -> Result<LinearRecurrence> {
    Ok(s.parse::<LinearRecurrence>()?)
}

fn policy(args: &PolicyArgs, threads: Option<usize>) -> CensusPolicy {
    let d = CensusPolicy::default();
    CensusPolicy {
        prp: PrpPolicy {
            seed: args.prp_seed.unwrap_or(d.prp.seed),
            rounds: args.prp_rounds.unwrap_or(d.prp.rounds),
        },
        sieve_bound: args.sieve_bound,
        kp_k_max: args.kp_k_max.unwrap_or(d.kp_k_max),
        threads,
        ..d
    }
}

fn cache_dir(common: &Common) -> Option<PathBuf> {
    std::env::var_os("RECPRIMES_CACHE").map(PathBuf::from).or_else(|| common.cache.clone())
}

fn open_cache(common: &Common) -> Result<Option<FactorCache>> {
    match cache_dir(common) {
        Some(dir) => {
            std::fs::create_dir_all(&dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
            Ok(Some(FactorCache::open(dir.join("factors.txt"))?))
        }
        None => Ok(None),
    }
}

fn envelope(cfg: &RunConfig, report: impl Serialize) -> Value {
    json!({ "config": cfg, "report": report })
}

/// Plain `key,value` CSV for reports without rows.
fn kv_csv(rows: &[(&str, String)]) -> String {
    let mut s = String::from("key,value\n");
    for (k, v) in rows {
        let _ = writeln!(s, "{k},{v}");
    }
    s
}

fn kv_table(rows: &[(&str, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

pub fn census_csv(r: &CensusReport) -> String {
    let mut s = String::from("n,digits,verdict,method\n");
    for h in &r.hits {
        let _ = writeln!(s, "{},{},{},{}", h.n, h.digits, h.verdict.label(), h.method.label());
    }
    s
}

fn census_table(r: &CensusReport) -> String {
    let mut s = kv_table(&[
        ("sequence", r.spec.to_string()),
        ("N", r.n_max.to_string()),
        ("hits", r.count().to_string()),
        ("tested", r.tested.to_string()),
        ("seconds", format!("{:.3}", r.wall_seconds)),
        ("partial", r.partial.to_string()),
    ]);
    if !r.checkpoints.is_empty() {
        let _ = writeln!(s, "\n{:>12} {:>8}", "N", "count");
        for c in &r.checkpoints {
            let _ = writeln!(s, "{:>12} {:>8}", c.n, c.count);
        }
    }
    let _ = writeln!(s, "\n{:>10} {:>10} {:>10} {:>14}", "n", "digits", "verdict", "method");
    for h in &r.hits {
        let _ = writeln!(s, "{:>10} {:>10} {:>10} {:>14}", h.n, h.digits, h.verdict.label(), h.method.label());
    }
    s
}

fn constant_rows(c: &ConstantEstimate) -> Vec<(&'static str, String)> {
    vec![
        ("name", c.name.clone()),
        ("value", c.value.clone()),
        ("truncation", format!("{:?}={}", c.truncation.parameter, c.truncation.value)),
        ("direction", format!("{:?}", c.direction).to_lowercase()),
        ("tail_bound", c.tail_bound.map_or("unknown".into(), |t| format!("{t:.3e}"))),
    ]
}

fn from_rows(cfg: &RunConfig, report: impl Serialize, rows: &[(&str, String)]) -> Rendered {
    Rendered { json: envelope(cfg, report), csv: kv_csv(rows), table: kv_table(rows) }
}

pub fn execute(cfg: &RunConfig) -> Result<Rendered> {
    let threads = cfg.common.threads;
    match &cfg.command {
        Command::Census(a) => {
            let rec = seq(&a.seq)?;
            let mut pol = policy(&a.policy, threads);
            pol.count_negative = a.abs;
            pol.log = a.resume.clone();
            if let Some(other) = &a.with {
                let rec2 = seq(other)?;
                let both = simultaneous_census(&rec, &rec2, a.n, &pol)?;
                let list = both.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
                let mut csv = String::from("n\n");
                for n in &both {
                    let _ = writeln!(csv, "{n}");
                }
                let rows = [("sequences", format!("{rec} & {rec2}")), ("N", a.n.to_string()), ("indices", list)];
                return Ok(Rendered {
                    json: envelope(cfg, json!({ "first": rec, "second": rec2, "N": a.n, "indices": both })),
                    csv,
                    table: kv_table(&rows),
                });
            }
            let r = match a.prune {
                PruneArg::None => census(&rec, a.n, &pol)?,
                PruneArg::Division => division_seq_census(&rec, a.n, a.n0, &pol)?,
                PruneArg::PrimePower => prime_power_census(&rec, a.n, &pol)?,
            };
            Ok(Rendered { json: envelope(cfg, &r), csv: census_csv(&r), table: census_table(&r) })
        }
        Command::Delta { seq: s, y, strategy } => {
            let rec = seq(s)?;
            let strategy = match strategy {
                StrategyArg::Sieve => Strategy::Sieve,
                StrategyArg::InclusionExclusion => Strategy::InclusionExclusion,
                StrategyArg::Reduced => Strategy::Reduced,
            };
            let r = delta_with(&rec, *y, strategy)?;
            let dec = format!("{:.6}", r.delta_f64());
            let rows = [
                ("sequence", rec.to_string()),
                ("y", y.to_string()),
                ("delta", dec.clone()),
                ("delta_exact", r.delta.to_string()),
                ("coprime_count", r.coprime_count.to_string()),
                ("window_length", r.window_length.to_string()),
                ("support", r.support.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
            ];
            let mut report = serde_json::to_value(&r)?;
            report["delta_decimal"] = Value::String(dec);
            report["sequence"] = Value::String(rec.to_string());
            Ok(from_rows(cfg, report, &rows))
        }
        Command::Predict { seq: s, n, y } => {
            let rec = seq(s)?;
            let p = predict_count(&rec, *n as f64, *y)?;
            let rows = [("sequence", rec.to_string()), ("N", n.to_string()), ("y", y.to_string()), ("prediction", format!("{p:.4}"))];
            Ok(from_rows(cfg, json!({ "sequence": rec, "N": n, "y": y, "prediction": p }), &rows))
        }
        Command::Covering(c) => covering(cfg, c),
        Command::Constants { which, param, k } => {
            if *which == ConstantKind::Beta {
                return beta(cfg, u32::try_from(*param).context("k out of range")?);
            }
            let c = match which {
                ConstantKind::C2 => twin_constant(*param)?,
                ConstantKind::Cv => cv_constant(*param)?,
                ConstantKind::Cvlb => cv_lower_bound(*param)?,
                ConstantKind::Ck => ck_constant(*k, *param)?,
                ConstantKind::Beta => unreachable!(),
            };
            Ok(from_rows(cfg, &c, &constant_rows(&c)))
        }
        Command::Moments { n, b, k, budget_seconds } => {
            let pol = policy(&PolicyArgs::default(), threads);
            let budget = budget_seconds.map(Duration::from_secs_f64);
            let r = empirical_moments_with(*n, *b, *k, &pol, budget)?;
            let mut csv = String::from("b,count\n");
            for (b, c) in &r.counts {
                let _ = writeln!(csv, "{b},{c}");
            }
            let rows = [
                ("N", n.to_string()),
                ("B", b.to_string()),
                ("k", k.to_string()),
                ("empirical", format!("{:.6}", r.empirical)),
                ("predicted", r.predicted.map_or("none".into(), |p| format!("{p:.6}"))),
                ("sequences", r.counts.len().to_string()),
                ("partial", r.partial.to_string()),
            ];
            Ok(Rendered { json: envelope(cfg, &r), csv, table: kv_table(&rows) })
        }
        Command::OmegaStats { seq: s, n, range, offset } => {
            let rec = seq(s)?;
            let cache = open_cache(&cfg.common)?;
            let oc = OmegaConfig { cache: cache.as_ref(), offset: *offset, ..OmegaConfig::default() };
            let range = match range {
                RangeArg::Upto => RangeConvention::UpTo,
                RangeArg::Dyadic => RangeConvention::Dyadic,
            };
            let run = || mean_omega_experiment_with(&rec, *n, range, &oc);
            let r = match threads {
                Some(t) => rayon_pool(t)?.install(run)?,
                None => run()?,
            };
            let mut csv = String::from("n,omega,complete\n");
            for t in &r.terms {
                let _ = writeln!(csv, "{},{},{}", t.n, t.omega, t.complete);
            }
            let rows = [
                ("sequence", r.spec.clone()),
                ("N", n.to_string()),
                ("range", format!("{:?}", r.range).to_lowercase()),
                ("observed_mean", format!("{:.4}", r.observed_mean)),
                ("prediction", format!("{:.4}", r.prediction)),
                ("lower_bound", r.lower_bound.to_string()),
            ];
            Ok(Rendered { json: envelope(cfg, &r), csv, table: kv_table(&rows) })
        }
        Command::Beta { k } => beta(cfg, *k),
        Command::Crosscheck { seq: s, n, bfile, policy: p } => {
            let rec = seq(s)?;
            let text = std::fs::read_to_string(bfile).with_context(|| format!("reading {}", bfile.display()))?;
            let indices = bfile_indices(&parse_bfile(&text)?)?;
            let report = census(&rec, *n, &policy(p, threads))?;
            let cc = crosscheck(&report, &indices);
            let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            let rows = [
                ("sequence", rec.to_string()),
                ("compared_up_to", cc.upper.to_string()),
                ("agree", cc.is_empty().to_string()),
                ("only_in_census", join(&cc.only_in_report)),
                ("only_in_bfile", join(&cc.only_in_bfile)),
            ];
            let out = from_rows(cfg, json!({ "crosscheck": cc, "census": report }), &rows);
            if !cc.is_empty() {
                print!("{}", out.select(cfg.common.out));
                bail!("census and b-file disagree");
            }
            Ok(out)
        }
    }
}

fn rayon_pool(t: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(t).build()?)
}

fn beta(cfg: &RunConfig, k: u32) -> Result<Rendered> {
    let r = beta_gamma(k)?;
    let line = format!("{:.6} {:.6}\n", r.beta, r.gamma);
    let rows = [
        ("k", k.to_string()),
        ("beta", r.beta_decimal.clone()),
        ("gamma", r.gamma_decimal.clone()),
        ("beta_residual", format!("{:.3e}", r.beta_residual)),
        ("gamma_residual", format!("{:.3e}", r.gamma_residual)),
    ];
    Ok(Rendered { json: envelope(cfg, &r), csv: kv_csv(&rows), table: line })
}

fn covering(cfg: &RunConfig, c: &CoveringCommand) -> Result<Rendered> {
    let verdict = |ok: bool| if ok { "true" } else { "false" }.to_string();
    match c {
        CoveringCommand::Verify { name: Some(name), .. } => {
            let nc = named_covering(name)?;
            let sc = verify_sequence_covering(&nc.sequence, &nc.system)?;
            let rows = [
                ("name", nc.name.clone()),
                ("sequence", nc.sequence.to_string()),
                ("holds", verdict(sc.holds())),
                ("window", sc.window.to_string()),
                ("idle_primes", nc.idle_primes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
            ];
            Ok(from_rows(cfg, json!({ "name": nc.name, "sequence": nc.sequence, "system": nc.system, "result": sc }), &rows))
        }
        CoveringCommand::Verify { seq: Some(s), primes, .. } => {
            let rec = seq(s)?;
            let sys = CoveringSystem::from_primes(&rec, primes)?;
            let sc = verify_sequence_covering(&rec, &sys)?;
            let rows = [("sequence", rec.to_string()), ("holds", verdict(sc.holds())), ("window", sc.window.to_string())];
            Ok(from_rows(cfg, json!({ "sequence": rec, "system": sys, "result": sc }), &rows))
        }
        CoveringCommand::Verify { .. } => bail!("covering verify needs --name or --seq with --primes"),
        CoveringCommand::Erdos { a, b } => {
            let a = a.as_deref().map(str::parse::<Integer>).transpose().context("parsing --a")?;
            let c = match b {
                Some(b) => erdos_check(a.unwrap_or_else(|| Integer::from(1)), b.parse().context("parsing --b")?)?,
                None => erdos_construction(a)?,
            };
            let rows = [
                ("a", c.a.to_string()),
                ("b", c.b.to_string()),
                ("gcd_scan", verdict(c.gcd_scan)),
                ("covering", verdict(c.covering)),
                ("verified", verdict(c.verified())),
            ];
            Ok(from_rows(cfg, &c, &rows))
        }
        CoveringCommand::Fibonacci { a, b } => {
            let ok = fibonacci_covering_check(*a, *b);
            let rows = [("a", a.to_string()), ("b", b.to_string()), ("holds", verdict(ok))];
            Ok(from_rows(cfg, json!({ "a": a, "b": b, "holds": ok }), &rows))
        }
    }
}
