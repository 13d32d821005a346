//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! `RECPRIMES_SLOW=1` adds the slow tier (the N = 10^4 census column and y = 25 densities).
//! The process exits 0 regardless, so `cargo test` stays usable; set
//! `RECPRIMES_STRICT=1` to exit 1 when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use recprimes::bigseq::{fibonacci_number, fibonacci_shift_identity, lucas_number, ShiftSign};
use recprimes::census::{census, division_seq_census, prime_power_census};
use recprimes::covering::{
    always_shares_factor, erdos_construction, fibonacci_covering_check, named_coverings, verify_sequence_covering,
    CoveringSystem,
};
use recprimes::density::{delta, delta_mod, delta_with, Strategy};
use recprimes::heuristics::{
    beta_gamma, compare_conventions, cv_constant, cv_lower_bound, empirical_moments, sieve_identity_check,
    twin_constant, OmegaConfig, MOMENT_CV_DMAX, OMEGA_FIXTURES,
};
use recprimes::{CensusPolicy, Integer, LinearRecurrence, Rational};

type Outcome = Result<String, String>;

const DENSITY_TOL: f64 = 0.01;
const DENSITY_TOL_SLOW: f64 = 0.02;
const TWIN_TOL: f64 = 1e-4;
const CVLB_TOL: f64 = 1e-6;
const OMEGA_TOL: f64 = 0.02;
const OMEGA_PRED_TOL: f64 = 0.005;
const MOMENT_REL_TOL: f64 = 0.15;
const MOMENT_FACTOR: f64 = 2.0;

fn slow() -> bool {
    std::env::var("RECPRIMES_SLOW").is_ok_and(|v| v == "1")
}

fn geom(a: i64, b: i64) -> LinearRecurrence {
    LinearRecurrence::geometric_shift(a, b).unwrap()
}

fn err(e: recprimes::Error) -> String {
    e.to_string()
}

/// `(a, b)` and the published counts at `N = 10^2, 10^3, 10^4`.
const CENSUS_TABLE: [((i64, i64), [usize; 3]); 18] = [
    ((1, -1), [10, 14, 22]),
    ((1, 1), [5, 5, 5]),
    ((1, -3), [13, 27, 34]),
    ((3, -1), [15, 25, 30]),
    ((1, 3), [15, 18, 31]),
    ((3, 1), [11, 19, 24]),
    ((1, -5), [13, 22, 31]),
    ((5, -1), [11, 17, 29]),
    ((1, 5), [6, 11, 11]),
    ((5, 1), [10, 11, 15]),
    ((1, -7), [1, 2, 6]),
    ((7, -1), [7, 8, 8]),
    ((1, 7), [15, 24, 34]),
    ((7, 1), [9, 19, 22]),
    ((3, -5), [14, 25, 35]),
    ((5, -3), [18, 32, 43]),
    ((3, 5), [22, 31, 49]),
    ((5, 3), [22, 34, 48]),
];

fn census_table() -> Outcome {
    let cols = if slow() { 3 } else { 2 };
    let n_max = 10u64.pow(cols as u32 + 1);
    let mut bad = Vec::new();
    for ((a, b), want) in CENSUS_TABLE {
        let rep = census(&geom(a, b), n_max, &CensusPolicy::default()).map_err(err)?;
        let got: Vec<usize> = (0..cols).map(|i| rep.count_up_to(10u64.pow(i as u32 + 2))).collect();
        if got != want[..cols] {
            bad.push(format!("{a}*2^n{b:+}: got {got:?}, want {:?}", &want[..cols]));
        }
    }
    let scope = if cols == 3 { "10^2..10^4" } else { "10^2, 10^3" };
    if bad.is_empty() {
        Ok(format!("18 rows match at N = {scope}"))
    } else {
        Err(bad.join("; "))
    }
}

fn classic_counts() -> Outcome {
    let pol = CensusPolicy::default();
    let m = division_seq_census(&LinearRecurrence::mersenne(), 10_000, Some(2), &pol).map_err(err)?.count();
    // F_19 has the factor 33629 * 2^21 + 1; trial division reaches it long before a
    // 2^19-squaring strong test would finish
    let fermat_pol = CensusPolicy { kp_k_max: 1 << 16, ..Default::default() };
    let f = prime_power_census(&geom(1, 1), 1_000_000, &fermat_pol).map_err(err)?;
    let fib = division_seq_census(&LinearRecurrence::fibonacci(), 10_000, Some(3), &pol).map_err(err)?.count();
    let candidates = f.tested;
    let detail = format!("2^n-1: {m}, 2^n+1: {} ({candidates} candidates), F_n: {fib}", f.count());
    if m == 22 && f.count() == 5 && candidates == 20 && fib == 26 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lucas_table() -> Outcome {
    // (alpha, beta, divided) with counts at 10^2 and 10^3
    let rows: [((i64, i64, bool), [usize; 2]); 4] =
        [((3, 1, true), [4, 6]), ((3, 2, false), [8, 11]), ((5, 3, true), [5, 8]), ((6, 5, false), [7, 8])];
    let mut bad = Vec::new();
    for ((al, be, div), want) in rows {
        let rec = LinearRecurrence::two_term(al, be, div).map_err(err)?;
        let rep = census(&rec, 1000, &CensusPolicy::default()).map_err(err)?;
        let got = [rep.count_up_to(100), rep.count_up_to(1000)];
        if got != want {
            bad.push(format!("{rec}: got {got:?}, want {want:?}"));
        }
    }
    if bad.is_empty() {
        Ok("4 rows match at N = 10^2, 10^3".into())
    } else {
        Err(bad.join("; "))
    }
}

/// Published `delta_{a,b}(R_y)` for `y = 5, 10, 15, 20, 25`.
const DENSITY_TABLE: [((i64, i64), [f64; 5]); 8] = [
    ((1, 3), [2.26, 2.52, 2.44, 2.46, 2.54]),
    ((1, -3), [3.39, 3.51, 3.38, 3.5, 3.46]),
    ((1, 5), [1.5, 1.44, 1.16, 1.05, 1.04]),
    ((1, -5), [2.26, 2.16, 2.55, 2.46, 2.54]),
    ((1, 7), [2.26, 2.16, 2.32, 2.52, 2.60]),
    ((1, -7), [1.13, 1.08, 0.85, 0.92, 0.91]),
    ((3, 5), [4.52, 4.18, 3.82, 3.9, 3.85]),
    ((3, -5), [3.02, 2.88, 3.22, 3.11, 3.21]),
];

fn density_table() -> Outcome {
    let ys: &[u64] = if slow() { &[5, 10, 15, 20, 25] } else { &[5, 10, 15, 20] };
    let mut bad = Vec::new();
    let mut worst = 0f64;
    for ((a, b), want) in DENSITY_TABLE {
        let rec = geom(a, b);
        for (i, &y) in ys.iter().enumerate() {
            let got = delta(&rec, y).map_err(err)?.delta_f64();
            let tol = if y == 25 { DENSITY_TOL_SLOW } else { DENSITY_TOL };
            let off = (got - want[i]).abs();
            worst = worst.max(off);
            if off > tol {
                bad.push(format!("({a},{b}) y={y}: {got:.4} vs {}", want[i]));
            }
        }
        for y in 2..=12 {
            let s = delta_with(&rec, y, Strategy::Sieve).map_err(err)?.delta;
            let ie = delta_with(&rec, y, Strategy::InclusionExclusion).map_err(err)?.delta;
            if s != ie {
                bad.push(format!("({a},{b}) y={y}: strategies disagree ({s} vs {ie})"));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("8 pairs at y = {ys:?}, max deviation {worst:.4}; strategies agree for y <= 12"))
    } else {
        Err(bad.join("; "))
    }
}

fn non_independence() -> Outcome {
    let mut notes = Vec::new();
    for (b, want) in [(-7i64, Rational::from((15, 32))), (7, Rational::from((15, 16)))] {
        let rec = geom(1, b);
        let d15 = delta_mod(&rec, 15);
        let prod = delta_mod(&rec, 3) * delta_mod(&rec, 5);
        if d15 != want {
            return Err(format!("2^n{b:+}: delta(15) = {d15}, want {want}"));
        }
        if d15 == prod {
            return Err(format!("2^n{b:+}: delta(15) equals delta(3) delta(5) = {prod}"));
        }
        notes.push(format!("2^n{b:+}: {d15} vs product {prod}"));
    }
    Ok(notes.join("; "))
}

fn coverings() -> Outcome {
    let mut names = Vec::new();
    for c in named_coverings().map_err(err)? {
        let v = verify_sequence_covering(&c.sequence, &c.system).map_err(err)?;
        if !v.holds() {
            return Err(format!("{} does not verify", c.name));
        }
        // a class is essential when dropping it uncovers some n; moving an essential
        // class by one residue must then break the system
        let mut essential = 0;
        for i in 0..c.system.congruences.len() {
            let mut sys: CoveringSystem = c.system.clone();
            sys.congruences.remove(i);
            if verify_sequence_covering(&c.sequence, &sys).map_err(err)?.coverage.covers {
                continue;
            }
            essential += 1;
            let mut moved = c.system.clone();
            let cg = &mut moved.congruences[i];
            cg.residue = (cg.residue + 1) % cg.modulus;
            if verify_sequence_covering(&c.sequence, &moved).map_err(err)?.holds() {
                return Err(format!("{} still holds with class {i} moved", c.name));
            }
        }
        if essential == 0 {
            return Err(format!("{} has no essential class", c.name));
        }
        // shift the sequence by 2
        let init: Vec<Integer> = c.sequence.initial_terms().iter().map(|u| Integer::from(u + 2)).collect();
        let moved = LinearRecurrence::new(c.sequence.coefficients().to_vec(), init).map_err(err)?;
        if always_shares_factor(&moved, &c.primes).map_err(err)? {
            return Err(format!("{} survives a shift by 2", c.name));
        }
        names.push(format!("{} ({essential}/{} essential)", c.name, c.system.congruences.len()));
    }
    let e = erdos_construction(None).map_err(err)?;
    if !e.verified() {
        return Err("Erdos construction fails".into());
    }
    let mut sys = e.system.clone();
    sys.congruences.pop();
    if recprimes::covering::verify_covers(&sys).map_err(err)?.covers {
        return Err("Erdos system covers with a class removed".into());
    }
    for a in [1i64, 3, 7, 11] {
        for r in [93_687i64, 103_377] {
            if !fibonacci_covering_check(a, r * a) {
                return Err(format!("Fibonacci covering fails for a = {a}, b = {r}a"));
            }
            if fibonacci_covering_check(a, r * a + 1) {
                return Err(format!("Fibonacci covering holds for a = {a}, b = {r}a + 1"));
            }
        }
    }
    Ok(format!("{}, erdos, fibonacci; perturbations fail", names.join(", ")))
}

fn fibonacci_shifts() -> Outcome {
    for n in 1..=500u64 {
        for (sign, s) in [(ShiftSign::Minus, -1i32), (ShiftSign::Plus, 1)] {
            let (i, j) = fibonacci_shift_identity(n, sign).map_err(err)?;
            if fibonacci_number(n) + s != fibonacci_number(i) * lucas_number(j) {
                return Err(format!("F_{n} {s:+} != F_{i} L_{j}"));
            }
        }
    }
    let mut values = BTreeSet::new();
    for c in [-1i64, 1] {
        let rec = LinearRecurrence::fibonacci_shift(c);
        let rep = census(&rec, 10_000, &CensusPolicy::default()).map_err(err)?;
        for h in &rep.hits {
            values.insert(rec.term(h.n));
        }
    }
    let want: BTreeSet<Integer> = [2, 3, 7].into_iter().map(Integer::from).collect();
    let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    if values == want {
        Ok(format!("identities hold for n <= 500; prime values of F_n +- 1 up to 10^4: {shown:?}"))
    } else {
        Err(format!("prime values {shown:?}"))
    }
}

fn constants() -> Outcome {
    let c2 = twin_constant(1_000_000).map_err(err)?.value_f64;
    let lb = cv_lower_bound(1_000_000).map_err(err)?.value_f64;
    let cv: Vec<f64> =
        [100u64, 300, 1000].iter().map(|&d| cv_constant(d).map(|c| c.value_f64)).collect::<Result<_, _>>().map_err(err)?;
    let b1 = beta_gamma(1).map_err(err)?;
    let b2 = beta_gamma(2).map_err(err)?;
    let b3 = beta_gamma(3).map_err(err)?;
    let detail = format!(
        "C2 {c2:.6}, cvlb {lb:.8}, cv(100,300,1000) {:.4} {:.4} {:.4}, beta/gamma k=1 ({:.6}, {:.6}) k=2 ({:.6}, {:.4}) k=3 ({:.4}, {:.4})",
        cv[0], cv[1], cv[2], b1.beta, b1.gamma, b2.beta, b2.gamma, b3.beta, b3.gamma
    );
    let ok = (c2 - 1.3203).abs() <= TWIN_TOL
        && (lb - 2.3009615).abs() <= CVLB_TOL
        && cv[0] < cv[1]
        && cv[1] < cv[2]
        && cv[2] > 2.30
        && b1.beta == 0.0
        && (b1.gamma - std::f64::consts::E).abs() < 5e-7
        && (b2.beta - 0.373365).abs() < 5e-7
        && (b2.gamma - 4.31).abs() < 5e-3
        && (b3.beta - 0.914).abs() < 5e-4
        && (b3.gamma - 5.764).abs() < 5e-4;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sieve_identity() -> Outcome {
    for y in 2..=12 {
        let s = sieve_identity_check(y).map_err(err)?;
        if !s.holds() {
            return Err(format!("y = {y}: {} != {}", s.lhs, s.rhs));
        }
    }
    Ok("lhs = rhs exactly for 2 <= y <= 12".into())
}

fn omega_means() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for fx in OMEGA_FIXTURES {
        let rec: LinearRecurrence = fx.spec.parse().map_err(err)?;
        let runs = compare_conventions(&rec, fx.n_max, fx.mean, OMEGA_TOL, &OmegaConfig::default()).map_err(err)?;
        let hit = runs.iter().find(|(_, m)| *m);
        match hit {
            Some((r, _)) => notes.push(format!("{} N={}: {:.2} ({:?})", fx.spec, fx.n_max, r.observed_mean, r.range)),
            None => {
                ok = false;
                let means: Vec<String> = runs.iter().map(|(r, _)| format!("{:.2}", r.observed_mean)).collect();
                notes.push(format!("{} N={}: {means:?} vs {}", fx.spec, fx.n_max, fx.mean));
            }
        }
        if fx.spec == "geom:1,-1" && (runs[0].0.prediction - fx.prediction).abs() > OMEGA_PRED_TOL {
            ok = false;
            notes.push(format!("prediction {:.3} vs {}", runs[0].0.prediction, fx.prediction));
        }
    }
    if ok {
        Ok(notes.join("; ") + "; Mersenne predictions 7.65, 10.60")
    } else {
        Err(notes.join("; "))
    }
}

fn moments() -> Outcome {
    let r1 = empirical_moments(512, 2000, 1, &CensusPolicy::default()).map_err(err)?;
    let m1 = r1.empirical;
    let m2 = r1.moment_of(2).to_f64();
    let target1 = 9.0;
    let target2 = cv_constant(MOMENT_CV_DMAX).map_err(err)?.value_f64 * 81.0;
    let detail = format!(
        "m1 {m1:.3} vs {target1} ({:+.1}%), m2 {m2:.2} vs m1^2 {:.2}, C_v (log2 N)^2 = {target2:.2}",
        100.0 * (m1 - target1) / target1,
        m1 * m1
    );
    let ok = ((m1 - target1) / target1).abs() <= MOMENT_REL_TOL
        && m2 > m1 * m1
        && m2 <= MOMENT_FACTOR * target2
        && m2 >= target2 / MOMENT_FACTOR;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn property_suites() -> Outcome {
    common::thread_invariance(&["geom:3,5", "geom:1,-3", "lucas:1,1"], 700)?;
    for (b, cut) in [(-5i64, 37u64), (3, 150), (7, 299)] {
        common::resume_equivalence(&geom(3, b), cut, 300)?;
    }
    common::prp_vs_sieve(10_000_000, 997)?;
    common::gcd_law(&LinearRecurrence::mersenne(), 200)?;
    common::gcd_law(&LinearRecurrence::fibonacci(), 200)?;
    common::omega_additivity(&LinearRecurrence::mersenne(), 60)?;
    common::omega_additivity(&LinearRecurrence::fibonacci(), 60)?;
    common::random_period_instances(0x9e37_79b9, 200)?;
    Ok("threads, resume, prp < 10^7, gcd law, omega additivity, 200 periods".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("census table", census_table),
        ("mersenne/fermat/fibonacci counts", classic_counts),
        ("lucas table", lucas_table),
        ("density table", density_table),
        ("non-independence mod 15", non_independence),
        ("covering systems", coverings),
        ("fibonacci shifts", fibonacci_shifts),
        ("constants", constants),
        ("sieve identity", sieve_identity),
        ("omega means", omega_means),
        ("moments", moments),
        ("property suites", property_suites),
    ];
    let only: Option<usize> = std::env::var("RECPRIMES_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match &out {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name} [{secs:.1}s]: {detail}", i + 1);
    }
    println!("{failed} failed");
    if failed > 0 && std::env::var("RECPRIMES_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
