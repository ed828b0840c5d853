//! Seeded random sampling.
//!
//! All randomness goes through ChaCha8 seeded from a `u64`, so residual
//! tables are reproducible across platforms for a pinned `rand` version.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::phase::PhasePoint;

pub type SeededRng = ChaCha8Rng;

pub const X_RANGE: (f64, f64) = (0.1, 2.0);
pub const P_RANGE: (f64, f64) = (-2.0, 2.0);

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random point with `x_i` in (0.1, 2) and `p_i` in (-2, 2).
pub fn sample_point(rng: &mut SeededRng, n: usize) -> PhasePoint {
    let x = (0..n).map(|_| rng.random_range(X_RANGE.0..X_RANGE.1)).collect();
    let p = (0..n).map(|_| rng.random_range(P_RANGE.0..P_RANGE.1)).collect();
    PhasePoint { x, p }
}

/// Random rational `num/den` with `|num| <= max_num` and `1 <= den <= max_den`.
pub fn sample_rational(rng: &mut SeededRng, max_num: i64, max_den: i64) -> BigRational {
    let num = rng.random_range(-max_num..=max_num);
    let den = rng.random_range(1..=max_den);
    BigRational::new(num.into(), den.into())
}

/// `n` pairwise distinct random rationals.
pub fn sample_distinct_rationals(rng: &mut SeededRng, n: usize, max_num: i64, max_den: i64) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(n);
    while out.len() < n {
        let q = sample_rational(rng, max_num, max_den);
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

/// `n` pairwise distinct positive random rationals.
pub fn sample_distinct_positive_rationals(rng: &mut SeededRng, n: usize, max_num: i64, max_den: i64) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(n);
    while out.len() < n {
        let num = rng.random_range(1..=max_num);
        let den = rng.random_range(1..=max_den);
        let q = BigRational::new(num.into(), den.into());
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}
