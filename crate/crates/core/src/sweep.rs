//! Randomized agreement and bound sweeps.
//!
//! Sample `i` of a sweep is drawn from stream `i` of the seed, so results
//! do not depend on the execution mode.

use rand::Rng;

use crate::bounds::{check_h_inequality, check_permanent_bound};
use crate::decomposition::{decompose_fixed_sum_with, DecompositionStrategy};
use crate::exec::Execution;
use crate::extremality::{is_extreme_sum, is_extreme_transportation, vertex_oracle, Polytope};
use crate::ratmat::{sub_defect_witness, Rational, SubstochMatrix};
use crate::sample::{random_fixed_sum, random_substochastic, random_with_subdefect, sample_rng};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub checked: usize,
    /// Inputs on which the checked property failed.
    pub failures: Vec<SubstochMatrix>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn collect(results: Vec<(SubstochMatrix, bool)>) -> Self {
        SweepSummary {
            checked: results.len(),
            failures: results.into_iter().filter(|(_, ok)| !ok).map(|(m, _)| m).collect(),
        }
    }
}

/// `sub_defect(A)` against the completion oracle: completable at `k`,
/// not at `k - 1`. Orders `1..=max_n`.
pub fn subdefect_sweep(max_n: usize, samples: usize, seed: u64, exec: Execution) -> SweepSummary {
    let results = exec.map_range(samples, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let n = rng.gen_range(1..=max_n);
        let a = if rng.gen_bool(0.25) {
            random_with_subdefect(n, rng.gen_range(0..=n), &mut rng).expect("k <= n")
        } else {
            random_substochastic(n, &mut rng)
        };
        let k = a.sub_defect();
        let ok = sub_defect_witness(&a, k).is_some() && (k == 0 || sub_defect_witness(&a, k - 1).is_none());
        (a, ok)
    });
    SweepSummary::collect(results)
}

/// `is_extreme_sum` against the rank oracle on random points of `omega_n^s`.
pub fn fixed_sum_agreement_sweep(n: usize, s: &Rational, samples: usize, seed: u64, exec: Execution) -> SweepSummary {
    let results = exec.map_range(samples, |i| {
        let a = random_fixed_sum(n, s, &mut sample_rng(seed, i as u64)).expect("s within [0, n]");
        let ok = vertex_oracle(&a, Polytope::FixedSum).ok() == Some(is_extreme_sum(&a).is_extreme());
        (a, ok)
    });
    SweepSummary::collect(results)
}

/// `is_extreme_transportation` against the rank oracle on random matrices.
pub fn transportation_agreement_sweep(n: usize, samples: usize, seed: u64, exec: Execution) -> SweepSummary {
    let results = exec.map_range(samples, |i| {
        let a = random_substochastic(n, &mut sample_rng(seed, i as u64));
        let ok = vertex_oracle(&a, Polytope::Transportation).ok() == Some(is_extreme_transportation(&a).is_extreme());
        (a, ok)
    });
    SweepSummary::collect(results)
}

/// `per(A) <= (sigma/n)^n` (and the strict sub-defect bound) on random
/// matrices of orders `1..=max_n`.
pub fn permanent_bound_sweep(max_n: usize, samples: usize, seed: u64, exec: Execution) -> SweepSummary {
    let results = exec.map_range(samples, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let n = rng.gen_range(1..=max_n);
        let a = if rng.gen_bool(0.5) {
            random_substochastic(n, &mut rng)
        } else {
            random_with_subdefect(n, rng.gen_range(0..=n), &mut rng).expect("k <= n")
        };
        let ok = check_permanent_bound(&a).is_ok_and(|r| r.satisfied);
        (a, ok)
    });
    SweepSummary::collect(results)
}

/// The `h(A) + h(B) - h(AB)` bounds on random pairs from `omega_{n,k}`.
/// A failing pair is reported as its two matrices.
pub fn h_inequality_sweep(n: usize, k: usize, samples: usize, seed: u64, exec: Execution) -> SweepSummary {
    let results = exec.map_range(samples, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let a = random_with_subdefect(n, k, &mut rng).expect("k <= n");
        let b = random_with_subdefect(n, k, &mut rng).expect("k <= n");
        let ok = check_h_inequality(&a, &b).is_ok_and(|r| r.satisfied);
        (a, b, ok)
    });
    SweepSummary {
        checked: results.len(),
        failures: results.into_iter().filter(|r| !r.2).flat_map(|(a, b, _)| [a, b]).collect(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecompositionSweep {
    pub summary: SweepSummary,
    pub max_depth: usize,
    pub max_terms: usize,
}

/// Decomposes random points of `omega_n^s` for each `s` in `sums` (cycled
/// by sample index) and checks exact recombination, extremality of every
/// term under both tests, and the depth bound `n^2 + 2n`.
pub fn decomposition_sweep(
    n: usize,
    sums: &[Rational],
    samples: usize,
    seed: u64,
    strategy: DecompositionStrategy,
    exec: Execution,
) -> DecompositionSweep {
    let results = exec.map_range(samples, |i| {
        let s = &sums[i % sums.len()];
        let a = random_fixed_sum(n, s, &mut sample_rng(seed, i as u64)).expect("s within [0, n]");
        let (combo, stats) = decompose_fixed_sum_with(&a, strategy, Execution::Sequential);
        let terms_ok = combo
            .terms
            .iter()
            .all(|(_, m)| is_extreme_sum(m).is_extreme() && vertex_oracle(m, Polytope::FixedSum).unwrap_or(false));
        let ok = combo.reproduces(&a) && terms_ok && stats.depth <= n * n + 2 * n;
        (a, ok, stats.depth, combo.len())
    });
    let max_depth = results.iter().map(|r| r.2).max().unwrap_or(0);
    let max_terms = results.iter().map(|r| r.3).max().unwrap_or(0);
    DecompositionSweep {
        summary: SweepSummary::collect(results.into_iter().map(|r| (r.0, r.1)).collect()),
        max_depth,
        max_terms,
    }
}
