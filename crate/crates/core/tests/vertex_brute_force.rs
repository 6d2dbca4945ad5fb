//! Vertices of `omega_n^s` for `n <= 3` found by brute force over bases:
//! every choice of `n^2` active constraints is solved exactly, kept if the
//! solution is feasible, and the resulting set is compared with the
//! library's enumeration and extremality test.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use substoch::construction::enumerate_fixed_sum_vertices;
use substoch::extremality::is_extreme_sum;
use substoch::ratmat::rational::{from_usize, one, parse_rational, zero};
use substoch::{Execution, Rational, SubstochMatrix};

/// Constraint rows `coeffs . x = rhs` that can be tight at a vertex.
fn candidate_constraints(n: usize, s: &Rational) -> Vec<(Vec<Rational>, Rational)> {
    let d = n * n;
    let mut out = Vec::new();
    for c in 0..d {
        let mut coeffs = vec![zero(); d];
        coeffs[c] = one();
        out.push((coeffs, zero()));
    }
    for i in 0..n {
        let mut coeffs = vec![zero(); d];
        for j in 0..n {
            coeffs[i * n + j] = one();
        }
        out.push((coeffs, one()));
    }
    for j in 0..n {
        let mut coeffs = vec![zero(); d];
        for i in 0..n {
            coeffs[i * n + j] = one();
        }
        out.push((coeffs, one()));
    }
    out.push((vec![one(); d], s.clone()));
    out
}

/// Unique solution of a square system, or `None` if it is singular.
fn solve(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let d = rows.len();
    for col in 0..d {
        let pivot = (col..d).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = rows[col][col].clone();
        for k in col..d {
            rows[col][k] /= &p;
        }
        rhs[col] /= &p;
        for r in 0..d {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for k in col..d {
                    let delta = &f * &rows[col][k];
                    rows[r][k] -= delta;
                }
                let delta = &f * &rhs[col];
                rhs[r] -= delta;
            }
        }
    }
    Some(rhs)
}

fn feasible(n: usize, s: &Rational, x: &[Rational]) -> bool {
    if x.iter().any(|v| v.is_negative()) {
        return false;
    }
    let total: Rational = x.iter().sum();
    let rows_ok = (0..n).all(|i| (0..n).map(|j| &x[i * n + j]).sum::<Rational>() <= one());
    let cols_ok = (0..n).all(|j| (0..n).map(|i| &x[i * n + j]).sum::<Rational>() <= one());
    total == *s && rows_ok && cols_ok
}

fn brute_force_vertices(n: usize, s: &Rational) -> BTreeSet<SubstochMatrix> {
    let constraints = candidate_constraints(n, s);
    let total = constraints.len() - 1;
    let mut found = BTreeSet::new();
    // The sum constraint is an equality, so it is always active.
    for basis in (0..total).combinations(n * n - 1) {
        let mut rows: Vec<Vec<Rational>> = basis.iter().map(|&b| constraints[b].0.clone()).collect();
        let mut rhs: Vec<Rational> = basis.iter().map(|&b| constraints[b].1.clone()).collect();
        rows.push(constraints[total].0.clone());
        rhs.push(constraints[total].1.clone());
        if let Some(x) = solve(rows, rhs) {
            if feasible(n, s, &x) {
                found.insert(SubstochMatrix::new(n, x).unwrap());
            }
        }
    }
    found
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 1..=3usize {
        for text in ["0", "1/2", "1", "7/5", "2", "12/5", "5/2", "3"] {
            let s = parse_rational(text).unwrap();
            if s > from_usize(n) {
                continue;
            }
            let expected = brute_force_vertices(n, &s);
            let listed: BTreeSet<_> = enumerate_fixed_sum_vertices(n, &s, 5, Execution::Sequential)
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(listed, expected, "n={n} s={text}");
            assert!(expected.iter().all(|v| is_extreme_sum(v).is_extreme()), "n={n} s={text}");
        }
    }
}

#[test]
fn non_vertices_are_rejected() {
    let n = 3;
    let s = parse_rational("12/5").unwrap();
    let vertices: Vec<_> = brute_force_vertices(n, &s).into_iter().collect();
    // Midpoints of distinct vertices are never vertices.
    for (a, b) in vertices.iter().tuple_combinations().step_by(7) {
        let half = parse_rational("1/2").unwrap();
        let mid = SubstochMatrix::weighted_sum(n, [(&half, a), (&half, b)]);
        let mid = SubstochMatrix::new(n, mid).unwrap();
        assert!(!is_extreme_sum(&mid).is_extreme(), "{mid}");
    }
}
