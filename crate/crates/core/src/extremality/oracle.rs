//! Vertex test by active-constraint rank.
//!
//! A point of a polytope is a vertex iff no nonzero direction keeps every
//! active constraint active. Unknowns are the perturbations of the positive
//! entries (zero entries sit on `x >= 0` and stay fixed); the equalities
//! are the sum constraints that are tight at the point. The point is a
//! vertex iff that homogeneous system has full column rank.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ratmat::{Rational, SubstochMatrix};

pub const DEFAULT_ORACLE_LIMIT: usize = 8;
pub const ORACLE_LIMIT_ENV: &str = "SUBSTOCH_ORACLE_LIMIT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polytope {
    /// `omega_n(R, S)` with `R, S` the matrix's own line sums.
    Transportation,
    /// `omega_n^s` with `s` the matrix's own element sum.
    FixedSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub limit: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

impl OracleConfig {
    /// Default limit, overridden by `SUBSTOCH_ORACLE_LIMIT` when it parses.
    pub fn from_env() -> Self {
        let limit = std::env::var(ORACLE_LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_ORACLE_LIMIT);
        OracleConfig { limit }
    }
}

pub fn vertex_oracle(a: &SubstochMatrix, polytope: Polytope) -> Result<bool> {
    vertex_oracle_with(a, polytope, &OracleConfig::default())
}

pub fn vertex_oracle_with(a: &SubstochMatrix, polytope: Polytope, config: &OracleConfig) -> Result<bool> {
    let n = a.n();
    if n > config.limit {
        return Err(Error::LimitExceeded {
            order: n,
            limit: config.limit,
        });
    }
    let support: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !a.get(i, j).is_zero())
        .collect();
    if support.is_empty() {
        return Ok(true);
    }
    let unit = Rational::one();
    let rows = a.row_sums();
    let cols = a.col_sums();
    let line = |pick: &dyn Fn(usize, usize) -> bool| -> Vec<Rational> {
        support
            .iter()
            .map(|&(i, j)| if pick(i, j) { Rational::one() } else { Rational::zero() })
            .collect()
    };
    let mut constraints = Vec::new();
    for r in 0..n {
        if polytope == Polytope::Transportation || rows[r] == unit {
            constraints.push(line(&|i, _| i == r));
        }
    }
    for c in 0..n {
        if polytope == Polytope::Transportation || cols[c] == unit {
            constraints.push(line(&|_, j| j == c));
        }
    }
    if polytope == Polytope::FixedSum {
        constraints.push(line(&|_, _| true));
    }
    Ok(rank(constraints) == support.len())
}

/// Rank of a rational matrix given as rows, by exact Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot_row[col];
            for c in col..width {
                if !pivot_row[c].is_zero() {
                    let delta = &factor * &pivot_row[c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
