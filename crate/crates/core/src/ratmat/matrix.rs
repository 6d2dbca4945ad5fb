use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{ceil_usize, from_usize, one, zero, Rational};
use crate::error::{Error, Result};

/// Square matrix with nonnegative rational entries whose row and column
/// sums are all at most one. Entries are stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubstochMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl SubstochMatrix {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if entries.len() != n * n {
            return Err(Error::NotSquare {
                row: entries.len() / n + 1,
                found: entries.len() % n,
                expected: n,
            });
        }
        let matrix = SubstochMatrix { n, entries };
        matrix.validate()?;
        Ok(matrix)
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i + 1,
                    found: row.len(),
                    expected: n,
                });
            }
            entries.extend(row);
        }
        Self::new(n, entries)
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..self.n {
                let value = self.get(i, j);
                if value.is_negative() {
                    return Err(Error::NegativeEntry {
                        row: i + 1,
                        col: j + 1,
                        value: value.clone(),
                    });
                }
            }
        }
        for (i, sum) in self.row_sums().into_iter().enumerate() {
            if sum > one() {
                return Err(Error::RowSumExceeded { row: i + 1, sum });
            }
        }
        for (j, sum) in self.col_sums().into_iter().enumerate() {
            if sum > one() {
                return Err(Error::ColumnSumExceeded { col: j + 1, sum });
            }
        }
        Ok(())
    }

    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "order must be positive");
        SubstochMatrix {
            n,
            entries: vec![zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = one();
        }
        m
    }

    /// 0/1 matrix with a one at `(i, assignment[i])` for every `Some` entry.
    pub fn partial_permutation(assignment: &[Option<usize>]) -> Result<Self> {
        let n = assignment.len();
        let mut entries = vec![zero(); n * n];
        for (i, target) in assignment.iter().enumerate() {
            if let Some(j) = *target {
                if j >= n {
                    return Err(Error::InvalidPermutation(n));
                }
                entries[i * n + j] = one();
            }
        }
        Self::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n)
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        self.entries[i * self.n..(i + 1) * self.n].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> Rational {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        (0..self.n).map(|i| self.row_sum(i)).collect()
    }

    pub fn col_sums(&self) -> Vec<Rational> {
        (0..self.n).map(|j| self.col_sum(j)).collect()
    }

    /// Sum of all entries.
    pub fn sigma(&self) -> Rational {
        self.entries.iter().sum()
    }

    /// `ceil(n - sigma)`: the number of extra rows/columns needed to embed
    /// the matrix in a doubly stochastic one.
    pub fn sub_defect(&self) -> usize {
        ceil_usize(&(from_usize(self.n) - self.sigma()))
    }

    pub fn profile(&self) -> RowColProfile {
        RowColProfile {
            rows: self.row_sums(),
            cols: self.col_sums(),
        }
    }

    pub fn classify(&self) -> PartitionLabel {
        PartitionLabel {
            k: self.sub_defect(),
            s: self.sigma(),
            profile: self.profile(),
        }
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        let unit = one();
        self.row_sums().iter().all(|s| *s == unit) && self.col_sums().iter().all(|s| *s == unit)
    }

    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n)
            .map(|idx| self.entries[(idx % n) * n + idx / n].clone())
            .collect();
        SubstochMatrix { n, entries }
    }

    /// Returns `B` with `B[i][j] = A[row_perm[i]][col_perm[j]]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        check_permutation(row_perm, self.n)?;
        check_permutation(col_perm, self.n)?;
        Ok(self.permuted_unchecked(row_perm, col_perm))
    }

    pub(crate) fn permuted_unchecked(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for &r in row_perm {
            for &c in col_perm {
                entries.push(self.get(r, c).clone());
            }
        }
        SubstochMatrix { n, entries }
    }

    /// Matrix product; the product of substochastic matrices is substochastic.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::OrderMismatch(self.n, other.n));
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero();
                for t in 0..n {
                    let a = self.get(i, t);
                    if !a.is_zero() {
                        acc += a * other.get(t, j);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(SubstochMatrix { n, entries })
    }

    /// Weighted sum `sum_t w_t * M_t` as a raw row-major grid.
    pub fn weighted_sum<'a>(
        n: usize,
        terms: impl IntoIterator<Item = (&'a Rational, &'a SubstochMatrix)>,
    ) -> Vec<Rational> {
        let mut acc = vec![zero(); n * n];
        for (weight, matrix) in terms {
            assert_eq!(matrix.n, n, "order mismatch in weighted sum");
            for (slot, value) in acc.iter_mut().zip(&matrix.entries) {
                if !value.is_zero() {
                    *slot += weight * value;
                }
            }
        }
        acc
    }

    pub(crate) fn from_raw_unchecked(n: usize, entries: Vec<Rational>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        SubstochMatrix { n, entries }
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect()
    }
}

/// Rows of `p/q` strings.
impl serde::Serialize for SubstochMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(serializer)
    }
}

impl fmt::Display for SubstochMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(n));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Prescribed row and column sums `(R, S)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowColProfile {
    rows: Vec<Rational>,
    cols: Vec<Rational>,
}

impl RowColProfile {
    /// Requires equal lengths, every value in `[0, 1]` and `|R| = |S|`.
    pub fn new(rows: Vec<Rational>, cols: Vec<Rational>) -> Result<Self> {
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(Error::InvalidProfile(format!(
                "row and column vectors must be nonempty and of equal length ({} vs {})",
                rows.len(),
                cols.len()
            )));
        }
        let unit = one();
        for (label, values) in [("row", &rows), ("column", &cols)] {
            for (idx, v) in values.iter().enumerate() {
                if v.is_negative() || *v > unit {
                    return Err(Error::InvalidProfile(format!(
                        "{label} sum {} = {v} outside [0,1]",
                        idx + 1
                    )));
                }
            }
        }
        let total_rows: Rational = rows.iter().sum();
        let total_cols: Rational = cols.iter().sum();
        if total_rows != total_cols {
            return Err(Error::InvalidProfile(format!(
                "incompatible totals |R| = {total_rows}, |S| = {total_cols}"
            )));
        }
        Ok(RowColProfile { rows, cols })
    }

    /// The rearrangement representative `v_n^s = (1,..,1, s - floor(s), 0,..,0)`.
    pub fn canonical_vector(n: usize, s: &Rational) -> Result<Vec<Rational>> {
        if s.is_negative() || *s > from_usize(n) {
            return Err(Error::InvalidProfile(format!("sum {s} outside [0,{n}]")));
        }
        let whole = super::rational::floor_usize(s);
        let frac = s - from_usize(whole);
        let mut v = vec![one(); whole];
        if v.len() < n {
            v.push(frac);
        }
        v.resize(n, zero());
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Rational] {
        &self.rows
    }

    pub fn cols(&self) -> &[Rational] {
        &self.cols
    }

    pub fn total(&self) -> Rational {
        self.rows.iter().sum()
    }

    /// True when both vectors are rearrangements of `v_n^s` for their total `s`.
    pub fn is_rearranged_canonical(&self) -> bool {
        let Ok(target) = Self::canonical_vector(self.n(), &self.total()) else {
            return false;
        };
        let sorted = |v: &[Rational]| {
            let mut v = v.to_vec();
            v.sort_by(|a, b| b.cmp(a));
            v
        };
        sorted(&self.rows) == target && sorted(&self.cols) == target
    }

}

/// Membership labels in the three partitions: sub-defect class, element-sum
/// class and transportation slice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionLabel {
    pub k: usize,
    pub s: Rational,
    pub profile: RowColProfile,
}

impl PartitionLabel {
    /// Checks `k = ceil(n - s)`, `s = |R| = |S|` and `s in [n-k, n-k+1)`.
    pub fn is_consistent(&self) -> bool {
        let n = self.profile.n();
        let nk = from_usize(n) - from_usize(self.k);
        let sum_ok = self.profile.total() == self.s
            && self.profile.cols().iter().sum::<Rational>() == self.s;
        let window_ok = if self.k == 0 {
            self.s == from_usize(n)
        } else {
            self.s >= nk && self.s < nk + Rational::one()
        };
        sum_ok && window_ok && self.k == ceil_usize(&(from_usize(n) - &self.s))
    }
}
