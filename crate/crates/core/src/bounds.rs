//! Maximum diagonal sums, permanents and the inequalities built on them.
//!
//! Everything is exact. Search results are evidence ("no counterexample
//! among the points examined"), not proofs.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::construction::{enumerate_fixed_sum_vertices, DEFAULT_ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ratmat::rational::{
    floor_usize, from_usize, one, rat, serialize_fraction, serialize_opt_fraction, zero,
};
use crate::ratmat::{Rational, SubstochMatrix};
use crate::sample::{random_fixed_sum, sample_rng};

/// Orders up to which `max_diagonal` enumerates all permutations.
pub const BRUTE_FORCE_LIMIT: usize = 8;
pub const PERMANENT_LIMIT: usize = 10;
/// Largest order accepted by the `per(I - A)` search (vertex enumeration
/// is part of it).
pub const PER_SEARCH_LIMIT: usize = DEFAULT_ENUMERATION_LIMIT;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundWitness {
    Permutation(Vec<usize>),
    Matrix(SubstochMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub quantity: String,
    #[serde(serialize_with = "serialize_fraction")]
    pub value: Rational,
    #[serde(serialize_with = "serialize_opt_fraction")]
    pub lower: Option<Rational>,
    #[serde(serialize_with = "serialize_opt_fraction")]
    pub upper: Option<Rational>,
    /// Must strictly exceed `upper` when present (`value <= upper < strict_upper`).
    #[serde(serialize_with = "serialize_opt_fraction")]
    pub strict_upper: Option<Rational>,
    pub satisfied: bool,
    pub witness: Option<BoundWitness>,
    pub note: Option<String>,
}

impl BoundReport {
    pub fn new(
        quantity: impl Into<String>,
        value: Rational,
        lower: Option<Rational>,
        upper: Option<Rational>,
        strict_upper: Option<Rational>,
    ) -> Self {
        let above = lower.as_ref().is_none_or(|l| *l <= value);
        let below = upper.as_ref().is_none_or(|u| value <= *u);
        let chain = match (&upper, &strict_upper) {
            (Some(u), Some(s)) => u < s,
            (None, Some(s)) => value < *s,
            _ => true,
        };
        BoundReport {
            quantity: quantity.into(),
            satisfied: above && below && chain,
            value,
            lower,
            upper,
            strict_upper,
            witness: None,
            note: None,
        }
    }

    fn with_witness(mut self, witness: BoundWitness) -> Self {
        self.witness = Some(witness);
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn diagonal_sum(a: &SubstochMatrix, perm: &[usize]) -> Rational {
    perm.iter().enumerate().map(|(i, &j)| a.get(i, j)).sum()
}

/// `h(A)`: the largest `sum_i a[i][perm[i]]` with an optimal `perm`.
/// Brute force up to `BRUTE_FORCE_LIMIT`, Hungarian method above; ties go
/// to the lexicographically first permutation in the brute-force range.
pub fn max_diagonal(a: &SubstochMatrix) -> (Rational, Vec<usize>) {
    if a.n() > BRUTE_FORCE_LIMIT {
        return max_diagonal_hungarian(a);
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for perm in (0..a.n()).permutations(a.n()) {
        let value = diagonal_sum(a, &perm);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, perm));
        }
    }
    best.expect("at least one permutation")
}

/// Maximum-weight assignment by the Hungarian method with exact potentials.
pub fn max_diagonal_hungarian(a: &SubstochMatrix) -> (Rational, Vec<usize>) {
    let n = a.n();
    let cost = |i: usize, j: usize| -a.get(i - 1, j - 1).clone();
    let mut u = vec![zero(); n + 1];
    let mut v = vec![zero(); n + 1];
    // owner[j]: row (1-based) assigned to column j, 0 if none
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<Rational>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                if delta.is_none() || minv[j] < delta {
                    delta = minv[j].clone();
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[owner[j] - 1] = j - 1;
    }
    (diagonal_sum(a, &perm), perm)
}

/// Permanent of an arbitrary (possibly signed) `n x n` rational array by
/// Ryser's inclusion-exclusion, walking column subsets in Gray-code order.
pub fn signed_permanent(n: usize, entries: &[Rational]) -> Rational {
    assert_eq!(entries.len(), n * n);
    if n == 0 {
        return one();
    }
    let mut row_sums = vec![zero(); n];
    let mut total = zero();
    let mut subset = 0u64;
    for g in 1u64..(1 << n) {
        let flip = g.trailing_zeros() as usize;
        subset ^= 1 << flip;
        let adding = subset & (1 << flip) != 0;
        for (i, sum) in row_sums.iter_mut().enumerate() {
            if adding {
                *sum += &entries[i * n + flip];
            } else {
                *sum -= &entries[i * n + flip];
            }
        }
        let product: Rational = row_sums.iter().product();
        if (n - subset.count_ones() as usize) % 2 == 0 {
            total += product;
        } else {
            total -= product;
        }
    }
    total
}

pub fn permanent(a: &SubstochMatrix) -> Result<Rational> {
    if a.n() > PERMANENT_LIMIT {
        return Err(Error::LimitExceeded {
            order: a.n(),
            limit: PERMANENT_LIMIT,
        });
    }
    Ok(signed_permanent(a.n(), a.entries()))
}

/// `h(A) + h(B) - h(AB)` against `[(n-k)/n, min(n, 2(n-k+1))]` for two
/// matrices of the same order and sub-defect `k`.
pub fn check_h_inequality(a: &SubstochMatrix, b: &SubstochMatrix) -> Result<BoundReport> {
    if a.n() != b.n() {
        return Err(Error::OrderMismatch(a.n(), b.n()));
    }
    let (ka, kb) = (a.sub_defect(), b.sub_defect());
    if ka != kb {
        return Err(Error::SubDefectMismatch(ka, kb));
    }
    let n = a.n();
    let k = ka;
    let product = a.product(b)?;
    let value = max_diagonal(a).0 + max_diagonal(b).0 - max_diagonal(&product).0;
    let lower = from_usize(n - k) / from_usize(n);
    let upper = from_usize(n.min(2 * (n - k + 1)));
    let report = BoundReport::new("h(A)+h(B)-h(AB)", value, Some(lower), Some(upper), None)
        .with_witness(BoundWitness::Matrix(product));
    if k == n && a.sigma().is_zero() && b.sigma().is_zero() {
        return Ok(report.with_note("k = n with zero matrices: both sides vanish, vacuous"));
    }
    Ok(report)
}

/// `0 <= per(A) <= (sigma/n)^n`, and for `k >= 1` also
/// `(sigma/n)^n < ((n-k+1)/n)^n`.
pub fn check_permanent_bound(a: &SubstochMatrix) -> Result<BoundReport> {
    let n = a.n();
    let value = permanent(a)?;
    let k = a.sub_defect();
    let nn = from_usize(n);
    let upper = num_traits::pow(a.sigma() / &nn, n);
    let strict = (k >= 1).then(|| num_traits::pow(from_usize(n - k + 1) / &nn, n));
    let report = BoundReport::new("per(A)", value, Some(zero()), Some(upper), strict);
    Ok(if k == 0 {
        report.with_note("k = 0: doubly stochastic, strict bound not applicable")
    } else {
        report
    })
}

pub fn per_i_minus_a(a: &SubstochMatrix) -> Rational {
    let n = a.n();
    let entries: Vec<Rational> = (0..n * n)
        .map(|c| {
            let diag = if c / n == c % n { one() } else { zero() };
            diag - a.entries()[c].clone()
        })
        .collect();
    signed_permanent(n, &entries)
}

/// `(t, 2^{t/2} (1 + ((s-t)/2)^2))` with `t` the greatest even integer not
/// above `s`. Requires `n` even, or `n` odd with `s <= n - 1`.
pub fn per_i_minus_a_formula(n: usize, s: &Rational) -> Result<(usize, Rational)> {
    if s.is_negative() || *s > from_usize(n) {
        return Err(Error::Precondition(format!("element sum {s} outside [0, {n}]")));
    }
    if n % 2 == 1 && *s > from_usize(n - 1) {
        return Err(Error::Precondition(format!(
            "odd order {n} requires element sum at most {}",
            n - 1
        )));
    }
    let whole = floor_usize(s);
    let t = whole - whole % 2;
    let half = (s - from_usize(t)) / from_usize(2);
    let value = num_traits::pow(from_usize(2), t / 2) * (one() + &half * &half);
    Ok((t, value))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerSearchConfig {
    pub samples: usize,
    pub seed: u64,
    /// Best points (vertices and samples) used as hill-climbing starts.
    pub climb_starts: usize,
    pub exec: Execution,
}

impl Default for PerSearchConfig {
    fn default() -> Self {
        PerSearchConfig {
            samples: 10_000,
            seed: 0,
            climb_starts: 16,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerMaxReport {
    pub n: usize,
    #[serde(serialize_with = "serialize_fraction")]
    pub s: Rational,
    pub t: usize,
    #[serde(serialize_with = "serialize_fraction")]
    pub formula: Rational,
    #[serde(serialize_with = "serialize_fraction")]
    pub best: Rational,
    pub witness: SubstochMatrix,
    pub vertices_checked: usize,
    pub samples_checked: usize,
    /// The best value found equals the formula value.
    pub attained: bool,
    /// A point whose value exceeds the formula, if one was found.
    pub counterexample: Option<SubstochMatrix>,
}

/// Denominator of the grid climbing steps are rounded to; keeps the entries
/// denominators bounded over many moves.
const CLIMB_GRID: i64 = 1000;

/// Feasible steps in `(0, hi)` near `peak`: the peak itself when its
/// denominator is small, otherwise its neighbours on the `1/CLIMB_GRID` grid.
fn snapped_steps(peak: &Rational, hi: &Rational) -> Vec<Rational> {
    let inside = |t: &Rational| t.is_positive() && t < hi;
    if !inside(peak) {
        return Vec::new();
    }
    if *peak.denom() <= num_bigint::BigInt::from(CLIMB_GRID) {
        return vec![peak.clone()];
    }
    let scaled = peak * rat(CLIMB_GRID, 1);
    [scaled.floor(), scaled.ceil()]
        .into_iter()
        .map(|g| g / rat(CLIMB_GRID, 1))
        .filter(inside)
        .collect()
}

/// Coordinate ascent of `per(I - A)` over `omega_n^s`, moving mass from one
/// cell to another. Along such a move the permanent is a quadratic in the
/// step, so each move jumps to (a grid point next to) its best feasible step.
fn climb(mut a: SubstochMatrix, max_rounds: usize) -> (Rational, SubstochMatrix) {
    let n = a.n();
    let mut value = per_i_minus_a(&a);
    for _ in 0..max_rounds {
        let mut improved = false;
        for p in 0..n * n {
            for q in 0..n * n {
                if p == q || a.entries()[q].is_zero() {
                    continue;
                }
                let (pr, pc, qr, qc) = (p / n, p % n, q / n, q % n);
                let mut hi = a.entries()[q].clone();
                if pr != qr {
                    hi = hi.min(one() - a.row_sum(pr));
                }
                if pc != qc {
                    hi = hi.min(one() - a.col_sum(pc));
                }
                if !hi.is_positive() {
                    continue;
                }
                let moved = |t: &Rational| {
                    let mut entries = a.entries().to_vec();
                    entries[p] += t;
                    entries[q] -= t;
                    SubstochMatrix::from_raw_unchecked(n, entries)
                };
                let half = &hi / from_usize(2);
                let f_hi = per_i_minus_a(&moved(&hi));
                let f_half = per_i_minus_a(&moved(&half));
                // f(t) = value + c1 t + c2 t^2
                let c2 = (&f_hi - from_usize(2) * &f_half + &value) * from_usize(2) / (&hi * &hi);
                let c1 = (&f_hi - &value) / &hi - &c2 * &hi;
                let mut best = (f_hi, hi.clone());
                if c2.is_negative() {
                    let peak = -&c1 / (from_usize(2) * &c2);
                    for t in snapped_steps(&peak, &hi) {
                        let f_t = per_i_minus_a(&moved(&t));
                        if f_t > best.0 {
                            best = (f_t, t);
                        }
                    }
                }
                if best.0 > value {
                    a = moved(&best.1);
                    value = best.0;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    (value, a)
}

/// Searches `per(I - A)` over `omega_n^s`: all extreme points, `samples`
/// random points, then hill climbing from the best `climb_starts` of them.
pub fn max_perm_i_minus_a(n: usize, s: &Rational, config: &PerSearchConfig) -> Result<PerMaxReport> {
    let (t, formula) = per_i_minus_a_formula(n, s)?;
    if n == 0 || n > PER_SEARCH_LIMIT {
        return Err(Error::LimitExceeded {
            order: n,
            limit: PER_SEARCH_LIMIT,
        });
    }
    let exec = config.exec;
    let vertices = enumerate_fixed_sum_vertices(n, s, PER_SEARCH_LIMIT, exec)?;
    let mut scored: Vec<(Rational, SubstochMatrix)> =
        exec.map(&vertices, |v| (per_i_minus_a(v), v.clone()));
    let sampled = exec.map_range(config.samples, |i| {
        let a = random_fixed_sum(n, s, &mut sample_rng(config.seed, i as u64)).expect("sum checked above");
        (per_i_minus_a(&a), a)
    });
    scored.extend(sampled);
    scored.sort_by(|x, y| y.0.cmp(&x.0).then_with(|| x.1.cmp(&y.1)));
    scored.dedup_by(|x, y| x.1 == y.1);

    let starts: Vec<SubstochMatrix> = scored.iter().take(config.climb_starts).map(|(_, m)| m.clone()).collect();
    let climbed = exec.map(&starts, |m| climb(m.clone(), 64));

    let counterexample = scored
        .iter()
        .chain(climbed.iter())
        .find(|(v, _)| *v > formula)
        .map(|(_, m)| m.clone());
    let (best, witness) = scored
        .iter()
        .chain(climbed.iter())
        .max_by(|x, y| x.0.cmp(&y.0).then_with(|| y.1.cmp(&x.1)))
        .cloned()
        .expect("at least one vertex");
    Ok(PerMaxReport {
        n,
        s: s.clone(),
        t,
        attained: best == formula,
        formula,
        best,
        witness,
        vertices_checked: vertices.len(),
        samples_checked: config.samples,
        counterexample,
    })
}

/// `(n, s)` grid points with `s` a multiple of `1/denominator` on which the
/// `per(I - A)` formula applies.
pub fn per_formula_grid(n: usize, denominator: usize) -> Vec<Rational> {
    let top = if n % 2 == 0 { n } else { n.saturating_sub(1) };
    (0..=top * denominator)
        .map(|p| rat(p as i64, denominator as i64))
        .collect()
}
