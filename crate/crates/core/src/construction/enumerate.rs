use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::extremality::direct_sum;
use crate::ratmat::rational::{ceil_usize, from_usize, is_integral, one, zero};
use crate::ratmat::{Rational, RowColProfile, SubstochMatrix};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 5;

type Residuals = (Vec<Option<Rational>>, Vec<Option<Rational>>);
type Placement = Vec<(usize, usize, Rational)>;

/// All vertices of `omega_n(R, S)`, in ascending matrix order.
///
/// Every vertex has a line with at most one positive entry, so it is reached
/// by some pivot order of the min-placement construction; the search
/// branches over every unfinished cell and memoizes residual states.
pub fn enumerate_transportation_vertices(profile: &RowColProfile, limit: usize) -> Result<Vec<SubstochMatrix>> {
    let n = profile.n();
    if n > limit {
        return Err(Error::LimitExceeded { order: n, limit });
    }
    let start = normalize((
        profile.rows().iter().cloned().map(Some).collect(),
        profile.cols().iter().cloned().map(Some).collect(),
    ));
    let mut memo = HashMap::new();
    let placements = complete(start, &mut memo);
    placements
        .iter()
        .map(|p| {
            let mut entries = vec![zero(); n * n];
            for (i, j, w) in p {
                entries[i * n + j] = w.clone();
            }
            SubstochMatrix::new(n, entries)
        })
        .collect()
}

fn normalize(mut state: Residuals) -> Residuals {
    for slot in state.0.iter_mut().chain(state.1.iter_mut()) {
        if slot.as_ref().is_some_and(Zero::is_zero) {
            *slot = None;
        }
    }
    state
}

fn complete(state: Residuals, memo: &mut HashMap<Residuals, Rc<Vec<Placement>>>) -> Rc<Vec<Placement>> {
    if let Some(hit) = memo.get(&state) {
        return Rc::clone(hit);
    }
    let (rows, cols) = &state;
    let mut found: BTreeSet<Placement> = BTreeSet::new();
    if rows.iter().all(Option::is_none) {
        found.insert(Vec::new());
    }
    for (i, r) in rows.iter().enumerate() {
        let Some(r) = r else { continue };
        for (j, s) in cols.iter().enumerate() {
            let Some(s) = s else { continue };
            let mut next = state.clone();
            let weight = if r <= s {
                next.0[i] = None;
                next.1[j] = Some(s - r);
                r.clone()
            } else {
                next.1[j] = None;
                next.0[i] = Some(r - s);
                s.clone()
            };
            for sub in complete(normalize(next), memo).iter() {
                let mut p = sub.clone();
                let at = p.partition_point(|&(a, b, _)| (a, b) < (i, j));
                p.insert(at, (i, j, weight.clone()));
                found.insert(p);
            }
        }
    }
    let result = Rc::new(found.into_iter().collect::<Vec<_>>());
    memo.insert(state, Rc::clone(&result));
    result
}

/// All vertices of `omega_n^s`: every row/column permutation of
/// `I_{ceil(s)-m} (+) B_m(s+1-ceil(s)) (+) O_{n-ceil(s)}` for
/// `1 <= m <= ceil(s)` (no `B` block when `s` is integral), deduplicated and
/// sorted.
pub fn enumerate_fixed_sum_vertices(
    n: usize,
    s: &Rational,
    limit: usize,
    exec: Execution,
) -> Result<Vec<SubstochMatrix>> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > limit {
        return Err(Error::LimitExceeded { order: n, limit });
    }
    if s.is_negative() || *s > from_usize(n) {
        return Err(Error::Precondition(format!("element sum {s} outside [0,{n}]")));
    }
    let top = ceil_usize(s);
    let bases: Vec<SubstochMatrix> = if is_integral(s) {
        vec![direct_sum(n, top, 0, &one())]
    } else {
        let alpha = s + one() - from_usize(top);
        (1..=top).map(|m| direct_sum(n, top - m, m, &alpha)).collect()
    };
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let chunks = exec.map(&perms, |row_perm| {
        let mut local = BTreeSet::new();
        for base in &bases {
            for col_perm in &perms {
                local.insert(base.permuted_unchecked(row_perm, col_perm));
            }
        }
        local
    });
    let mut all = BTreeSet::new();
    for chunk in chunks {
        all.extend(chunk);
    }
    Ok(all.into_iter().collect())
}

/// Canonical representative of the orbit of `a` under independent row and
/// column permutations: the least (row-major) matrix among the
/// column-sorted forms of all row permutations.
pub fn orbit_key(a: &SubstochMatrix) -> SubstochMatrix {
    let n = a.n();
    (0..n)
        .permutations(n)
        .map(|row_perm| {
            let mut columns: Vec<Vec<Rational>> = (0..n)
                .map(|j| row_perm.iter().map(|&i| a.get(i, j).clone()).collect())
                .collect();
            columns.sort();
            let mut entries = Vec::with_capacity(n * n);
            for i in 0..n {
                for col in &columns {
                    entries.push(col[i].clone());
                }
            }
            SubstochMatrix::from_raw_unchecked(n, entries)
        })
        .min()
        .expect("at least one permutation")
}

/// One canonical representative per orbit, sorted.
pub fn orbit_representatives(matrices: &[SubstochMatrix]) -> Vec<SubstochMatrix> {
    matrices.iter().map(orbit_key).collect::<BTreeSet<_>>().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::parse_matrix;
    use crate::ratmat::rational::{int, parse_rational, rat};

    fn profile(rows: &str, cols: &str) -> RowColProfile {
        let p = |t: &str| t.split_whitespace().map(|x| parse_rational(x).unwrap()).collect();
        RowColProfile::new(p(rows), p(cols)).unwrap()
    }

    #[test]
    fn birkhoff_two_by_two() {
        let v = enumerate_transportation_vertices(&profile("1 1", "1 1"), 5).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|m| m.entries().iter().all(|x| x.is_zero() || *x == one())));
    }

    #[test]
    fn diag_profile_contains_diag() {
        let v = enumerate_transportation_vertices(&profile("0.9 0.9 0.6", "0.9 0.9 0.6"), 5).unwrap();
        let diag = parse_matrix("0.9 0 0 / 0 0.9 0 / 0 0 0.6").unwrap();
        assert!(v.contains(&diag));
    }

    #[test]
    fn fixed_sum_counts() {
        let seq = Execution::Sequential;
        assert_eq!(enumerate_fixed_sum_vertices(3, &int(3), 5, seq).unwrap().len(), 6);
        assert_eq!(enumerate_fixed_sum_vertices(3, &int(2), 5, seq).unwrap().len(), 18);
        assert_eq!(enumerate_fixed_sum_vertices(2, &int(0), 5, seq).unwrap(), vec![SubstochMatrix::zero(2)]);
        let v = enumerate_fixed_sum_vertices(4, &rat(18, 5), 5, Execution::Parallel).unwrap();
        assert_eq!(orbit_representatives(&v).len(), 4);
        assert!(enumerate_fixed_sum_vertices(3, &int(4), 5, seq).is_err());
        assert!(enumerate_fixed_sum_vertices(6, &int(1), 5, seq).is_err());
    }

    #[test]
    fn orbit_key_is_invariant() {
        let a = parse_matrix("0 0.6 0.4 / 0.6 0.4 0 / 0.4 0 0").unwrap();
        let b = a.permuted(&[1, 2, 0], &[2, 0, 1]).unwrap();
        assert_eq!(orbit_key(&a), orbit_key(&b));
        assert_ne!(orbit_key(&a), orbit_key(&SubstochMatrix::identity(3)));
    }
}
