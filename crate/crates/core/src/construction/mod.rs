//! Inductive construction of transportation-polytope vertices: pick an
//! unfinished cell, place `min(r_i, s_j)`, finish the exhausted line and
//! continue on the residual sums.

mod enumerate;

use std::fmt;

use num_traits::Zero;

pub use enumerate::{
    enumerate_fixed_sum_vertices, enumerate_transportation_vertices, orbit_key, orbit_representatives,
    DEFAULT_ENUMERATION_LIMIT,
};

use crate::error::{Error, Result};
use crate::ratmat::rational::zero;
use crate::ratmat::{check_permutation, Rational, RowColProfile, SubstochMatrix};

/// Which line to finish when `r_i = s_j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TieRule {
    #[default]
    CompleteRow,
    CompleteColumn,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum PivotPolicy {
    /// Lowest unfinished row, then lowest unfinished column.
    #[default]
    NorthWest,
    /// Explicit 0-based `(row, col)` cells, consumed in order.
    Explicit(Vec<(usize, usize)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeOrientation {
    /// `r_i <= s_j`: the row is finished, weight `r_i`.
    RowToCol,
    /// `r_i >= s_j`: the column is finished, weight `s_j`.
    ColToRow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEdge {
    pub row: usize,
    pub col: usize,
    pub weight: Rational,
    pub orientation: EdgeOrientation,
}

impl fmt::Display for TraceEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.orientation {
            EdgeOrientation::RowToCol => write!(f, "r{} -> s{} [{}]", self.row + 1, self.col + 1, self.weight),
            EdgeOrientation::ColToRow => write!(f, "s{} -> r{} [{}]", self.col + 1, self.row + 1, self.weight),
        }
    }
}

/// Weighted directed bipartite graph of a construction, in placement order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub edges: Vec<TraceEdge>,
}

impl ConstructionTrace {
    pub fn weights(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.weight.clone()).collect()
    }

    /// Rebuilds the matrix by placing each edge weight at its cell.
    pub fn replay(&self, n: usize) -> Result<SubstochMatrix> {
        let mut entries = vec![zero(); n * n];
        for e in &self.edges {
            if e.row >= n || e.col >= n {
                return Err(Error::PivotOutOfRange { row: e.row + 1, col: e.col + 1 });
            }
            entries[e.row * n + e.col] = e.weight.clone();
        }
        SubstochMatrix::new(n, entries)
    }
}

/// Residual sums (`None` marks a finished line), the partial matrix and the
/// ordered placement log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionState {
    n: usize,
    rows: Vec<Option<Rational>>,
    cols: Vec<Option<Rational>>,
    entries: Vec<Rational>,
    trace: ConstructionTrace,
}

impl ConstructionState {
    /// Starts from a profile; lines with sum zero are finished immediately.
    pub fn new(profile: &RowColProfile) -> Self {
        let n = profile.n();
        let mut state = ConstructionState {
            n,
            rows: profile.rows().iter().cloned().map(Some).collect(),
            cols: profile.cols().iter().cloned().map(Some).collect(),
            entries: vec![zero(); n * n],
            trace: ConstructionTrace::default(),
        };
        state.finish_zero_lines();
        state
    }

    fn finish_zero_lines(&mut self) {
        for slot in self.rows.iter_mut().chain(self.cols.iter_mut()) {
            if slot.as_ref().is_some_and(Zero::is_zero) {
                *slot = None;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_residual(&self, i: usize) -> Option<&Rational> {
        self.rows[i].as_ref()
    }

    pub fn col_residual(&self, j: usize) -> Option<&Rational> {
        self.cols[j].as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(Option::is_none) && self.cols.iter().all(Option::is_none)
    }

    pub fn trace(&self) -> &ConstructionTrace {
        &self.trace
    }

    pub fn northwest(&self) -> Option<(usize, usize)> {
        let i = self.rows.iter().position(Option::is_some)?;
        let j = self.cols.iter().position(Option::is_some)?;
        Some((i, j))
    }

    /// Places `min(r_i, s_j)` at `(i, j)` and finishes the exhausted line.
    pub fn place(&mut self, i: usize, j: usize, tie: TieRule) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::PivotOutOfRange { row: i + 1, col: j + 1 });
        }
        let (Some(r), Some(s)) = (self.rows[i].clone(), self.cols[j].clone()) else {
            return Err(Error::FinishedPivot { row: i + 1, col: j + 1 });
        };
        let finish_row = r < s || (r == s && tie == TieRule::CompleteRow);
        let (weight, orientation) = if finish_row {
            self.rows[i] = None;
            self.cols[j] = Some(&s - &r);
            (r, EdgeOrientation::RowToCol)
        } else {
            self.cols[j] = None;
            self.rows[i] = Some(&r - &s);
            (s, EdgeOrientation::ColToRow)
        };
        self.entries[i * self.n + j] = weight.clone();
        self.trace.edges.push(TraceEdge {
            row: i,
            col: j,
            weight,
            orientation,
        });
        self.finish_zero_lines();
        debug_assert_eq!(
            self.rows.iter().flatten().sum::<Rational>(),
            self.cols.iter().flatten().sum::<Rational>()
        );
        Ok(())
    }

    pub fn finish(self) -> Result<(SubstochMatrix, ConstructionTrace)> {
        if !self.is_complete() {
            return Err(Error::PivotsExhausted);
        }
        let matrix = SubstochMatrix::new(self.n, self.entries)?;
        Ok((matrix, self.trace))
    }
}

/// Runs the construction to completion under a pivot policy.
pub fn jurkat_ryser(
    profile: &RowColProfile,
    pivots: &PivotPolicy,
    tie: TieRule,
) -> Result<(SubstochMatrix, ConstructionTrace)> {
    let mut state = ConstructionState::new(profile);
    match pivots {
        PivotPolicy::NorthWest => {
            while let Some((i, j)) = state.northwest() {
                state.place(i, j, tie)?;
            }
        }
        PivotPolicy::Explicit(list) => {
            for &(i, j) in list {
                state.place(i, j, tie)?;
            }
        }
    }
    state.finish()
}

/// `R'[t] = R[row_perm[t]]`, `S'[t] = S[col_perm[t]]`.
pub fn permute_profile(profile: &RowColProfile, row_perm: &[usize], col_perm: &[usize]) -> Result<RowColProfile> {
    let n = profile.n();
    check_permutation(row_perm, n)?;
    check_permutation(col_perm, n)?;
    let rows = row_perm.iter().map(|&i| profile.rows()[i].clone()).collect();
    let cols = col_perm.iter().map(|&j| profile.cols()[j].clone()).collect();
    RowColProfile::new(rows, cols)
}

/// Permutations sorting each vector in descending order (stable).
pub fn descending_order(profile: &RowColProfile) -> (Vec<usize>, Vec<usize>) {
    let order = |v: &[Rational]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[b].cmp(&v[a]));
        idx
    };
    (order(profile.rows()), order(profile.cols()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremality::{is_extreme_sum, is_extreme_transportation};
    use crate::ratmat::parse_matrix;
    use crate::ratmat::rational::{one, parse_rational, rat};

    fn profile(rows: &str, cols: &str) -> RowColProfile {
        let p = |t: &str| t.split_whitespace().map(|x| parse_rational(x).unwrap()).collect();
        RowColProfile::new(p(rows), p(cols)).unwrap()
    }

    pub(crate) const WORKED_PIVOTS: [(usize, usize); 9] =
        [(0, 0), (3, 1), (1, 1), (1, 2), (2, 2), (2, 3), (4, 3), (4, 0), (4, 4)];

    #[test]
    fn worked_example() {
        let p = profile("0.6 0.9 0.7 0.4 0.8", "0.8 0.7 0.9 0.6 0.4");
        let (m, trace) =
            jurkat_ryser(&p, &PivotPolicy::Explicit(WORKED_PIVOTS.to_vec()), TieRule::CompleteRow).unwrap();
        let expected = parse_matrix(
            "0.6 0 0 0 0
             0 0.3 0.6 0 0
             0 0 0.3 0.4 0
             0 0.4 0 0 0
             0.2 0 0 0.2 0.4",
        )
        .unwrap();
        assert_eq!(m, expected);
        let weights: Vec<Rational> =
            ["0.6", "0.4", "0.3", "0.6", "0.3", "0.4", "0.2", "0.2", "0.4"].iter().map(|w| parse_rational(w).unwrap()).collect();
        assert_eq!(trace.weights(), weights);
        let orient: Vec<_> = trace.edges.iter().map(|e| e.orientation).collect();
        use EdgeOrientation::*;
        assert_eq!(orient, vec![RowToCol, RowToCol, ColToRow, RowToCol, ColToRow, RowToCol, ColToRow, ColToRow, RowToCol]);
        assert_eq!(trace.replay(5).unwrap(), m);
        assert!(is_extreme_transportation(&m).is_extreme());
    }

    #[test]
    fn northwest_identity() {
        let p = profile("1 1", "1 1");
        let (m, _) = jurkat_ryser(&p, &PivotPolicy::NorthWest, TieRule::CompleteRow).unwrap();
        assert_eq!(m, SubstochMatrix::identity(2));
        let (m, _) = jurkat_ryser(&p, &PivotPolicy::NorthWest, TieRule::CompleteColumn).unwrap();
        assert_eq!(m, SubstochMatrix::identity(2));
    }

    #[test]
    fn northwest_canonical_profile() {
        let v = RowColProfile::canonical_vector(4, &rat(12, 5)).unwrap();
        let p = RowColProfile::new(v.clone(), v).unwrap();
        let (m, _) = jurkat_ryser(&p, &PivotPolicy::NorthWest, TieRule::CompleteRow).unwrap();
        assert_eq!(m, parse_matrix("1 0 0 0 / 0 1 0 0 / 0 0 0.4 0 / 0 0 0 0").unwrap());
        assert!(is_extreme_sum(&m).is_extreme());
    }

    #[test]
    fn pivot_errors() {
        let p = profile("0.5 0.5", "0.5 0.5");
        let err = jurkat_ryser(&p, &PivotPolicy::Explicit(vec![(0, 0), (0, 1)]), TieRule::CompleteRow).unwrap_err();
        assert_eq!(err, Error::FinishedPivot { row: 1, col: 2 });
        let err = jurkat_ryser(&p, &PivotPolicy::Explicit(vec![(0, 0)]), TieRule::CompleteRow).unwrap_err();
        assert_eq!(err, Error::PivotsExhausted);
        let err = jurkat_ryser(&p, &PivotPolicy::Explicit(vec![(0, 7)]), TieRule::CompleteRow).unwrap_err();
        assert_eq!(err, Error::PivotOutOfRange { row: 1, col: 8 });
    }

    #[test]
    fn zero_lines_are_skipped() {
        let p = profile("0 1", "1 0");
        let (m, trace) = jurkat_ryser(&p, &PivotPolicy::NorthWest, TieRule::CompleteRow).unwrap();
        assert_eq!(m.get(1, 0), &one());
        assert_eq!(trace.edges.len(), 1);
    }

    #[test]
    fn profile_permutation() {
        let p = profile("0.6 0.9 0.7 0.4 0.8", "0.8 0.7 0.9 0.6 0.4");
        let (rows, cols) = descending_order(&p);
        let sorted = permute_profile(&p, &rows, &cols).unwrap();
        let expect: Vec<Rational> = ["0.9", "0.8", "0.7", "0.6", "0.4"].iter().map(|x| parse_rational(x).unwrap()).collect();
        assert_eq!(sorted.rows(), expect.as_slice());
        let id: Vec<usize> = (0..5).collect();
        assert_eq!(permute_profile(&p, &id, &id).unwrap(), p);
        assert!(permute_profile(&p, &[0, 0, 1, 2, 3], &id).is_err());
    }
}
