use rayon::prelude::*;

use crate::arith::primes_up_to;
use crate::bigseq::LinearRecurrence;
use crate::moddyn::term_mod;

/// Dense when stepping through every `n` is cheaper than one power per index.
pub(super) fn is_dense(indices: &[u64]) -> bool {
    match indices.last() {
        Some(&max) => (indices.len() as u64).saturating_mul(16) >= max,
        None => true,
    }
}

/// For each index, the smallest prime `p <= bound` dividing `u_n`, or 0.
///
/// A mark is only evidence of compositeness when `|u_n| > p`; the caller checks size.
pub(super) fn smallest_divisors(rec: &LinearRecurrence, indices: &[u64], bound: u64) -> Vec<u64> {
    if indices.is_empty() || bound < 2 {
        return vec![0; indices.len()];
    }
    let primes = primes_up_to(bound);
    let dense = is_dense(indices);
    primes
        .par_chunks(64)
        .fold(
            || vec![0u64; indices.len()],
            |mut acc, chunk| {
                for &p in chunk {
                    if dense {
                        step_marks(rec, indices, p, &mut acc);
                    } else {
                        for (slot, &n) in acc.iter_mut().zip(indices) {
                            if *slot == 0 && term_mod(rec, n, p) == 0 {
                                *slot = p;
                            }
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; indices.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    if y != 0 && (*x == 0 || y < *x) {
                        *x = y;
                    }
                }
                a
            },
        )
}

/// Walks `u_n mod p` for `0 <= n <= max index`; `p < 2^32` keeps products in a `u64`.
fn step_marks(rec: &LinearRecurrence, indices: &[u64], p: u64, acc: &mut [u64]) {
    debug_assert!(p < 1 << 32);
    let coeffs = rec.coefficients_mod(p);
    let mut state = rec.initial_mod(p);
    let k = state.len();
    let mut head = 0usize;
    let mut j = 0usize;
    let max = *indices.last().unwrap();
    for n in 0..=max {
        if n == indices[j] {
            if state[head] == 0 && acc[j] == 0 {
                acc[j] = p;
            }
            j += 1;
            if j == indices.len() {
                break;
            }
        }
        let mut next = 0u64;
        for (i, &a) in coeffs.iter().enumerate() {
            next = (next + a * state[(head + k - 1 - i) % k]) % p;
        }
        state[head] = next;
        head = (head + 1) % k;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_sparse_agree() {
        let r = LinearRecurrence::geometric_shift(3, 5).unwrap();
        let dense: Vec<u64> = (1..=300).collect();
        let sparse: Vec<u64> = vec![1, 2, 4, 64, 200, 300];
        assert!(is_dense(&dense) && !is_dense(&sparse));
        let d = smallest_divisors(&r, &dense, 500);
        let s = smallest_divisors(&r, &sparse, 500);
        for (i, &n) in sparse.iter().enumerate() {
            assert_eq!(s[i], d[(n - 1) as usize], "n = {n}");
        }
        // 3*2^1 + 5 = 11
        assert_eq!(d[0], 11);
        // 3*2^2 + 5 = 17
        assert_eq!(d[1], 17);
    }
}
