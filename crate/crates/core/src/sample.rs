//! Seeded random matrices for sweeps and property checks.
//!
//! Every sample index gets its own ChaCha stream, so a sweep produces the
//! same matrices whether it runs sequentially or in parallel.

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extremality::direct_sum;
use crate::ratmat::rational::{ceil_usize, floor_usize, from_usize, is_integral, one, rat};
use crate::ratmat::{Rational, SubstochMatrix};

pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

fn random_grid<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u64> {
    let density = rng.gen_range(0.3..1.0);
    (0..n * n)
        .map(|_| if rng.gen_bool(density) { rng.gen_range(1..=9) } else { 0 })
        .collect()
}

fn max_line(n: usize, grid: &[u64]) -> u64 {
    let rows = (0..n).map(|i| grid[i * n..(i + 1) * n].iter().sum::<u64>());
    let cols = (0..n).map(|j| (0..n).map(|i| grid[i * n + j]).sum::<u64>());
    rows.chain(cols).max().unwrap_or(0)
}

/// A random element of `omega_n`: a sparse integer grid divided by its
/// largest line sum plus a random slack, so some samples have saturated
/// lines and some do not.
pub fn random_substochastic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SubstochMatrix {
    let grid = random_grid(n, rng);
    let slack = if rng.gen_bool(0.3) { 0 } else { rng.gen_range(0..=12) };
    let scale = (max_line(n, &grid) + slack).max(1);
    let entries = grid.iter().map(|&g| rat(g as i64, scale as i64)).collect();
    SubstochMatrix::from_raw_unchecked(n, entries)
}

fn check_sum(n: usize, s: &Rational) -> Result<()> {
    if s.is_negative() || *s > from_usize(n) {
        return Err(Error::Precondition(format!("element sum {s} outside [0, {n}]")));
    }
    Ok(())
}

/// A random extreme point of `omega_n^s`: a randomly permuted
/// `I_p (+) B_m(alpha) (+) O` (a partial permutation matrix for integral `s`).
pub fn random_fixed_sum_vertex<R: Rng + ?Sized>(n: usize, s: &Rational, rng: &mut R) -> Result<SubstochMatrix> {
    check_sum(n, s)?;
    let base = if is_integral(s) {
        direct_sum(n, floor_usize(s), 0, &one())
    } else {
        let top = ceil_usize(s);
        let m = rng.gen_range(1..=top);
        let alpha = s + one() - from_usize(top);
        direct_sum(n, top - m, m, &alpha)
    };
    let rows = random_permutation(n, rng);
    let cols = random_permutation(n, rng);
    Ok(base.permuted_unchecked(&rows, &cols))
}

/// A random element of `omega_n^s`: either a rescaled sparse grid (when it
/// fits) or a convex combination of a few random extreme points.
pub fn random_fixed_sum<R: Rng + ?Sized>(n: usize, s: &Rational, rng: &mut R) -> Result<SubstochMatrix> {
    check_sum(n, s)?;
    if !s.is_zero() && rng.gen_bool(0.3) {
        for _ in 0..4 {
            let grid = random_grid(n, rng);
            let total: u64 = grid.iter().sum();
            if total == 0 {
                continue;
            }
            let total = from_usize(total as usize);
            if from_usize(max_line(n, &grid) as usize) * s <= total {
                let entries = grid.iter().map(|&g| from_usize(g as usize) * s / &total).collect();
                return Ok(SubstochMatrix::from_raw_unchecked(n, entries));
            }
        }
    }
    let count = *[1, 2, 2, 3, 3, 4, n * n].choose(rng).expect("nonempty");
    let weights: Vec<u64> = (0..count).map(|_| rng.gen_range(1..=6)).collect();
    let total: u64 = weights.iter().sum();
    let mut terms = Vec::with_capacity(count);
    for &w in &weights {
        terms.push((rat(w as i64, total as i64), random_fixed_sum_vertex(n, s, rng)?));
    }
    let entries = SubstochMatrix::weighted_sum(n, terms.iter().map(|(w, m)| (w, m)));
    Ok(SubstochMatrix::from_raw_unchecked(n, entries))
}

/// A random element of `omega_{n,k}`: element sum drawn from `[n-k, n-k+1)`
/// (exactly `n` when `k = 0`).
pub fn random_with_subdefect<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<SubstochMatrix> {
    if k > n {
        return Err(Error::Precondition(format!("sub-defect {k} exceeds order {n}")));
    }
    let mut s = from_usize(n - k);
    if k > 0 {
        let denom = *[2i64, 3, 5, 10].choose(rng).expect("nonempty");
        s += rat(rng.gen_range(0..denom), denom);
    }
    random_fixed_sum(n, &s, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremality::is_extreme_sum;

    #[test]
    fn samples_are_valid() {
        for idx in 0..200 {
            let mut rng = sample_rng(7, idx);
            let n = 1 + (idx as usize % 5);
            let a = random_substochastic(n, &mut rng);
            assert!(a.validate().is_ok());
            let s = rat(idx as i64 % (2 * n as i64 + 1), 2);
            let b = random_fixed_sum(n, &s, &mut rng).unwrap();
            assert!(b.validate().is_ok());
            assert_eq!(b.sigma(), s);
            let v = random_fixed_sum_vertex(n, &s, &mut rng).unwrap();
            assert!(is_extreme_sum(&v).is_extreme());
            let k = idx as usize % (n + 1);
            let c = random_with_subdefect(n, k, &mut rng).unwrap();
            assert_eq!(c.sub_defect(), k);
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let a = random_substochastic(4, &mut sample_rng(1, 5));
        let b = random_substochastic(4, &mut sample_rng(1, 5));
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_range_sums_rejected() {
        let mut rng = sample_rng(0, 0);
        assert!(random_fixed_sum(3, &rat(7, 2), &mut rng).is_err());
        assert!(random_with_subdefect(3, 4, &mut rng).is_err());
    }
}
