use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::integer::Order;
use rug::Integer;
use serde::{Deserialize, Serialize};

use super::functions::{mul_mod, pow_mod};

/// Evidence attached to a composite verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Evidence {
    /// A nontrivial divisor.
    Factor(Integer),
    /// A base for which the strong probable-prime test fails.
    Witness(Integer),
    /// `n <= 1`: neither prime nor composite, reported as not prime.
    NotAboveOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProofMethod {
    /// Strong tests with a witness set that is deterministic below `2^64`.
    Deterministic64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Composite(Evidence),
    ProbablePrime { rounds: u32 },
    ProvenPrime(ProofMethod),
}

impl Verdict {
    pub fn is_prime(&self) -> bool {
        !matches!(self, Verdict::Composite(_))
    }

    /// Short label used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Composite(_) => "composite",
            Verdict::ProbablePrime { .. } => "prp",
            Verdict::ProvenPrime(_) => "proven",
        }
    }
}

/// Parameters for big-integer probable-prime testing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrpPolicy {
    /// Random-base strong rounds after the base-2 test.
    pub rounds: u32,
    /// Seed for the per-input base generator.
    pub seed: u64,
}

impl Default for PrpPolicy {
    fn default() -> Self {
        PrpPolicy { rounds: 24, seed: 0x5eed_2024 }
    }
}

impl PrpPolicy {
    /// Base generator for `n`; depends only on the seed and `n`, never on call order.
    fn rng_for(&self, n: &Integer) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        let low = n.to_digits::<u8>(Order::Lsf);
        for (i, b) in low.iter().take(16).enumerate() {
            key[8 + i] = *b;
        }
        key[24..].copy_from_slice(&(n.significant_bits() as u64).to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }
}

const WITNESS64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn strong_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in WITNESS64 {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    WITNESS64.iter().all(|&a| strong_u64(n, a))
}

/// Reduction modulo `n`, with shift-and-add folding when `n = 2^N +- 1`.
enum Reducer<'a> {
    Generic(&'a Integer),
    PlusOne(u32, &'a Integer),
    MinusOne(u32, &'a Integer),
}

impl<'a> Reducer<'a> {
    fn new(n: &'a Integer) -> Self {
        let bits = n.significant_bits();
        if bits > 64 {
            if Integer::from(n - 1u32).is_power_of_two() {
                return Reducer::PlusOne(bits - 1, n);
            }
            if Integer::from(n + 1u32).is_power_of_two() {
                return Reducer::MinusOne(bits, n);
            }
        }
        Reducer::Generic(n)
    }

    fn reduce(&self, x: &mut Integer) {
        match *self {
            Reducer::Generic(n) => *x %= n,
            Reducer::PlusOne(k, n) => loop {
                if *x < 0 {
                    *x += n;
                } else if *x < *n {
                    break;
                } else {
                    let hi = Integer::from(&*x >> k);
                    x.keep_bits_mut(k);
                    *x -= hi;
                }
            },
            Reducer::MinusOne(k, n) => {
                while *x >= *n {
                    if x.significant_bits() <= k {
                        *x -= n;
                    } else {
                        let hi = Integer::from(&*x >> k);
                        x.keep_bits_mut(k);
                        *x += hi;
                    }
                }
            }
        }
    }

    fn pow(&self, a: &Integer, e: &Integer) -> Integer {
        match *self {
            Reducer::Generic(n) => a.clone().pow_mod(e, n).unwrap(),
            _ => {
                let mut base = a.clone();
                self.reduce(&mut base);
                let mut x = Integer::from(1);
                for i in (0..e.significant_bits()).rev() {
                    x.square_mut();
                    self.reduce(&mut x);
                    if e.get_bit(i) {
                        x *= &base;
                        self.reduce(&mut x);
                    }
                }
                x
            }
        }
    }
}

/// Strong probable-prime test of odd `n > 3` to base `a`.
pub fn strong_probable_prime(n: &Integer, a: &Integer) -> bool {
    let red = Reducer::new(n);
    let nm1 = Integer::from(n - 1u32);
    let s = nm1.find_one(0).unwrap();
    let d = Integer::from(&nm1 >> s);
    let mut x = red.pow(a, &d);
    if x == 1 || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x.square_mut();
        red.reduce(&mut x);
        if x == nm1 {
            return true;
        }
        if x == 1 {
            return false;
        }
    }
    false
}

const SMALL: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Primality verdict: deterministic below `2^64`, otherwise base 2 plus `policy.rounds`
/// seeded random bases.
pub fn is_probable_prime(n: &Integer, policy: &PrpPolicy) -> Verdict {
    if *n <= 1 {
        return Verdict::Composite(Evidence::NotAboveOne);
    }
    if let Some(w) = n.to_u64() {
        if is_prime_u64(w) {
            return Verdict::ProvenPrime(ProofMethod::Deterministic64);
        }
        for p in WITNESS64 {
            if w % p == 0 {
                return Verdict::Composite(Evidence::Factor(Integer::from(p)));
            }
        }
        let a = WITNESS64.iter().find(|&&a| !strong_u64(w, a)).unwrap();
        return Verdict::Composite(Evidence::Witness(Integer::from(*a)));
    }
    for p in SMALL {
        if n.is_divisible_u(p) {
            return Verdict::Composite(Evidence::Factor(Integer::from(p)));
        }
    }
    let two = Integer::from(2);
    if !strong_probable_prime(n, &two) {
        return Verdict::Composite(Evidence::Witness(two));
    }
    let mut rng = policy.rng_for(n);
    let bits = n.significant_bits();
    let upper = Integer::from(n - 3u32);
    for _ in 0..policy.rounds {
        // uniform-enough base in [3, n-2]
        let mut a = Integer::new();
        let words = bits.div_ceil(64) as usize;
        let digits: Vec<u64> = (0..words).map(|_| rng.random()).collect();
        a.assign_digits(&digits, Order::Lsf);
        a %= &upper;
        a += 3u32;
        if !strong_probable_prime(n, &a) {
            return Verdict::Composite(Evidence::Witness(a));
        }
    }
    Verdict::ProbablePrime { rounds: policy.rounds + 1 }
}
