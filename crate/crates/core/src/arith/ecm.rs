//! Lenstra's elliptic curve method on Montgomery curves with Suyama's
//! parametrisation, x-only arithmetic, and a baby-step giant-step stage 2.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::RemRounding;
use rug::Integer;

use super::functions::{gcd_u64, primes_up_to};

#[derive(Clone)]
struct Point {
    x: Integer,
    z: Integer,
}

struct Curve<'a> {
    n: &'a Integer,
    a24: Integer,
}

impl Curve<'_> {
    fn reduce(&self, mut v: Integer) -> Integer {
        v %= self.n;
        if v < 0 {
            v += self.n;
        }
        v
    }

    fn dbl(&self, p: &Point) -> Point {
        let s = Integer::from(&p.x + &p.z);
        let d = Integer::from(&p.x - &p.z);
        let ss = self.reduce(Integer::from(s.square_ref()));
        let dd = self.reduce(Integer::from(d.square_ref()));
        let t = Integer::from(&ss - &dd);
        let x = self.reduce(Integer::from(&ss * &dd));
        let z = self.reduce(t.clone() * (dd + Integer::from(&self.a24 * &t)));
        Point { x, z }
    }

    /// `p + q` given `diff = p - q`.
    fn add(&self, p: &Point, q: &Point, diff: &Point) -> Point {
        let u = Integer::from(&p.x - &p.z) * Integer::from(&q.x + &q.z);
        let v = Integer::from(&p.x + &p.z) * Integer::from(&q.x - &q.z);
        let u = self.reduce(u);
        let v = self.reduce(v);
        let sum = Integer::from(&u + &v);
        let dif = Integer::from(&u - &v);
        let x = self.reduce(self.reduce(Integer::from(sum.square_ref())) * &diff.z);
        let z = self.reduce(self.reduce(Integer::from(dif.square_ref())) * &diff.x);
        Point { x, z }
    }

    fn mul(&self, p: &Point, k: u64) -> Point {
        if k == 1 {
            return p.clone();
        }
        let mut r0 = p.clone();
        let mut r1 = self.dbl(p);
        for bit in (0..63 - k.leading_zeros()).rev() {
            if (k >> bit) & 1 == 1 {
                r0 = self.add(&r1, &r0, p);
                r1 = self.dbl(&r1);
            } else {
                r1 = self.add(&r1, &r0, p);
                r0 = self.dbl(&r0);
            }
        }
        r0
    }
}

pub(super) enum CurveOutcome {
    Factor(Integer),
    Nothing,
}

fn nontrivial(g: Integer, n: &Integer) -> Option<Integer> {
    (g != 1 && g != *n).then_some(g)
}

/// One curve with Suyama parameter `sigma`, stage-1 bound `b1`, stage-2 bound `b2`.
pub(super) fn one_curve(n: &Integer, sigma: u64, b1: u64, b2: u64, primes: &[u64]) -> CurveOutcome {
    let sig = Integer::from(sigma);
    let u = Integer::from(sig.square_ref()) - 5u32;
    let v = Integer::from(&sig * 4u32);
    let mut x0 = Integer::from(u.pow_mod_ref(&Integer::from(3), n).unwrap());
    let z0 = Integer::from(v.pow_mod_ref(&Integer::from(3), n).unwrap());
    // a24 = (v - u)^3 (3u + v) / (16 u^3 v)
    let vmu = Integer::from(&v - &u);
    let num = Integer::from(vmu.pow_mod_ref(&Integer::from(3), n).unwrap()) * (Integer::from(&u * 3u32) + &v);
    let den = Integer::from(&x0 * 16u32) * &v;
    let den = den.rem_euc(n);
    let inv = match den.clone().invert(n) {
        Ok(i) => i,
        Err(_) => {
            return match nontrivial(den.gcd(n), n) {
                Some(f) => CurveOutcome::Factor(f),
                None => CurveOutcome::Nothing,
            };
        }
    };
    let a24 = (num * inv).rem_euc(n);
    x0 = x0.rem_euc(n);
    let curve = Curve { n, a24 };
    let mut q = Point { x: x0, z: z0 };

    // stage 1
    for &p in primes.iter().take_while(|&&p| p <= b1) {
        let mut pk = p;
        while pk <= b1 / p {
            pk *= p;
        }
        q = curve.mul(&q, pk);
    }
    if let Some(f) = nontrivial(Integer::from(q.z.gcd_ref(n)), n) {
        return CurveOutcome::Factor(f);
    }
    if q.z.is_divisible(n) {
        return CurveOutcome::Nothing;
    }

    // stage 2: primes b1 < p <= b2 written as p = m*D +- j
    const D: u64 = 2310;
    let half = D / 2;
    let mut baby = vec![None::<Point>; (half + 1) as usize];
    let q2 = curve.dbl(&q);
    let mut prev = q.clone(); // [1]Q
    let mut cur = curve.add(&q2, &q, &q); // [3]Q
    baby[1] = Some(prev.clone());
    let mut j = 3;
    while j <= half {
        if gcd_u64(j, D) == 1 {
            baby[j as usize] = Some(cur.clone());
        }
        let next = curve.add(&cur, &q2, &prev);
        prev = cur;
        cur = next;
        j += 2;
    }
    let qd = curve.mul(&q, D);
    let mut m = b1 / D;
    let mut giant = if m == 0 { Point { x: Integer::from(1), z: Integer::new() } } else { curve.mul(&q, m * D) };
    let mut giant_prev = if m <= 1 {
        Point { x: Integer::from(1), z: Integer::new() }
    } else {
        curve.mul(&q, (m - 1) * D)
    };
    let mut acc = Integer::from(1);
    let mut pi = primes.partition_point(|&p| p <= b1);
    let mut batch = 0u32;
    while pi < primes.len() && primes[pi] <= b2 {
        let center = m * D;
        while pi < primes.len() && primes[pi] <= center + half && primes[pi] <= b2 {
            let p = primes[pi];
            let j = p.abs_diff(center);
            if let Some(b) = baby.get(j as usize).and_then(|b| b.as_ref()) {
                if m > 0 {
                    let t = Integer::from(&giant.x * &b.z) - Integer::from(&b.x * &giant.z);
                    acc = curve.reduce(acc * t);
                    batch += 1;
                }
            }
            pi += 1;
        }
        if batch >= 256 {
            if let Some(f) = nontrivial(Integer::from(acc.gcd_ref(n)), n) {
                return CurveOutcome::Factor(f);
            }
            batch = 0;
        }
        // next giant step: [(m+1)D]Q = [mD]Q + [D]Q with difference [(m-1)D]Q
        let next = if m == 0 {
            qd.clone()
        } else if m == 1 {
            curve.dbl(&qd)
        } else {
            curve.add(&giant, &qd, &giant_prev)
        };
        giant_prev = giant;
        giant = next;
        m += 1;
    }
    match nontrivial(acc.gcd(n), n) {
        Some(f) => CurveOutcome::Factor(f),
        None => CurveOutcome::Nothing,
    }
}

/// Runs up to `curves` curves at stage-1 bound `b1` (stage 2 to `100 * b1`).
pub(super) fn ecm(n: &Integer, b1: u64, curves: u32, seed: u64) -> Option<Integer> {
    let b2 = 100 * b1;
    let primes = primes_up_to(b2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.significant_bits() as u64);
    for _ in 0..curves {
        let sigma = rng.random_range(6..u32::MAX as u64);
        if let CurveOutcome::Factor(f) = one_curve(n, sigma, b1, b2, &primes) {
            return Some(f);
        }
    }
    None
}
