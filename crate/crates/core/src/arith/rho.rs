//! Pollard rho, Brent's variant, with batched gcds.

use rug::Integer;

/// Outcome of a rho run on a composite `n`.
pub(super) enum RhoOutcome {
    Factor(Integer),
    #[cfg_attr(not(test), allow(dead_code))]
    Exhausted { used: u64 },
}

/// Searches for a factor of odd composite `n` with `x -> x^2 + c`, spending at most
/// `budget` iterations across restarts with `c = c0, c0+1, ...`.
pub(super) fn brent(n: &Integer, budget: u64, c0: u64) -> RhoOutcome {
    let mut used = 0u64;
    let mut c = c0.max(1);
    while used < budget {
        let cc = Integer::from(c);
        let step = |x: &Integer| -> Integer {
            let mut y = Integer::from(x.square_ref());
            y += &cc;
            y %= n;
            y
        };
        let mut y = Integer::from(2);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = Integer::from(1);
        let mut g = Integer::from(1);
        let mut r = 1u64;
        const M: u64 = 128;
        'outer: while g == 1 {
            x.clone_from(&y);
            for _ in 0..r {
                y = step(&y);
            }
            used += r;
            let mut k = 0;
            while k < r && g == 1 {
                ys.clone_from(&y);
                let batch = M.min(r - k);
                for _ in 0..batch {
                    y = step(&y);
                    let diff = Integer::from(&x - &y).abs();
                    q *= diff;
                    q %= n;
                }
                used += batch;
                g = Integer::from(q.gcd_ref(n));
                k += batch;
                if used >= budget && g == 1 {
                    break 'outer;
                }
            }
            r *= 2;
        }
        if g == *n {
            // batch overshot: walk from the saved point
            g = Integer::from(1);
            let mut guard = 0u64;
            while g == 1 && guard < 2 * M {
                ys = step(&ys);
                g = Integer::from(&x - &ys).abs().gcd(n);
                guard += 1;
            }
        }
        if g != 1 && g != *n {
            return RhoOutcome::Factor(g);
        }
        c += 1;
    }
    RhoOutcome::Exhausted { used }
}
