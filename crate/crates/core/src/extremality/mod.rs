//! Extremality in the three families of subpolytopes: transportation slices
//! `omega_n(R,S)`, element-sum slices `omega_n^s` and sub-defect classes
//! `omega_{n,k}`.

mod canonical;
mod oracle;

use std::fmt;

pub use canonical::{b_matrix, recognize_canonical, CanonicalForm};
pub(crate) use canonical::direct_sum;
pub use oracle::{
    rank, vertex_oracle, vertex_oracle_with, OracleConfig, Polytope, DEFAULT_ORACLE_LIMIT, ORACLE_LIMIT_ENV,
};

use crate::bigraph::{find_splitting_path, Cycle, SplittingWitness, SupportGraph};
use crate::ratmat::rational::from_usize;
use crate::ratmat::SubstochMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransportationExtremality {
    Extreme,
    NotExtreme(Cycle),
}

impl TransportationExtremality {
    pub fn is_extreme(&self) -> bool {
        matches!(self, TransportationExtremality::Extreme)
    }
}

/// A matrix is extreme in its own transportation slice iff its support
/// graph is a forest. Zero lines are forced and play no role.
pub fn is_extreme_transportation(a: &SubstochMatrix) -> TransportationExtremality {
    match SupportGraph::build(a).find_cycle() {
        Some(cycle) => TransportationExtremality::NotExtreme(cycle),
        None => TransportationExtremality::Extreme,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonExtremeWitness {
    Cycle(Cycle),
    Splitting(SplittingWitness),
}

impl fmt::Display for NonExtremeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonExtremeWitness::Cycle(c) => write!(f, "cycle {c}"),
            NonExtremeWitness::Splitting(w) => write!(f, "splitting {w}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumExtremality {
    Extreme(CanonicalForm),
    NotExtreme(NonExtremeWitness),
}

impl SumExtremality {
    pub fn is_extreme(&self) -> bool {
        matches!(self, SumExtremality::Extreme(_))
    }
}

/// Extremality in `omega_n^s` for `s = sigma(A)`, decided by recognizing
/// the direct-sum form `I (+) B_m(alpha) (+) O` up to row and column
/// permutations.
pub fn is_extreme_sum(a: &SubstochMatrix) -> SumExtremality {
    if let Some(form) = recognize_canonical(a) {
        return SumExtremality::Extreme(form);
    }
    if let Some(cycle) = SupportGraph::build(a).find_cycle() {
        return SumExtremality::NotExtreme(NonExtremeWitness::Cycle(cycle));
    }
    let witness = find_splitting_path(a)
        .expect("a non-canonical forest admits a splitting path or cross-component pair");
    SumExtremality::NotExtreme(NonExtremeWitness::Splitting(witness))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubdefectExtremality {
    /// Extreme with `sigma = n - k`, a member of `omega_{n,k}`.
    Interior(CanonicalForm),
    /// Extreme with `sigma = n - k + 1`: a limit point of `omega_{n,k}`.
    Limit(CanonicalForm),
    NotExtreme,
}

impl SubdefectExtremality {
    pub fn is_extreme(&self) -> bool {
        !matches!(self, SubdefectExtremality::NotExtreme)
    }
}

/// Extremality for the sub-defect class `k` (defaults to the matrix's own
/// sub-defect): the extreme points are those of `omega_n^{n-k}` together
/// with those of `omega_n^{n-k+1}`.
pub fn is_extreme_subdefect(a: &SubstochMatrix, k: Option<usize>) -> SubdefectExtremality {
    let n = a.n();
    let k = k.unwrap_or_else(|| a.sub_defect());
    if k > n {
        return SubdefectExtremality::NotExtreme;
    }
    let s = a.sigma();
    let low = from_usize(n - k);
    let high = from_usize(n - k + 1);
    if s != low && s != high {
        return SubdefectExtremality::NotExtreme;
    }
    match is_extreme_sum(a) {
        SumExtremality::Extreme(form) if s == low => SubdefectExtremality::Interior(form),
        SumExtremality::Extreme(form) => SubdefectExtremality::Limit(form),
        SumExtremality::NotExtreme(_) => SubdefectExtremality::NotExtreme,
    }
}
