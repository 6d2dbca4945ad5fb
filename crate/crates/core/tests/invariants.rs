use proptest::prelude::*;

use substoch::bigraph::SupportGraph;
use substoch::bounds::{max_diagonal, permanent};
use substoch::construction::{jurkat_ryser, PivotPolicy, TieRule};
use substoch::decomposition::{decompose_fixed_sum, decompose_fixed_sum_with, DecompositionStrategy};
use substoch::extremality::{b_matrix, is_extreme_sum};
use substoch::ratmat::rational::{ceil_usize, from_usize, int, one, rat, zero};
use substoch::ratmat::{format_matrix, parse_matrix, sub_defect_witness, Rational, RowColProfile, SubstochMatrix};
use substoch::sample::{random_fixed_sum, random_fixed_sum_vertex, random_permutation, sample_rng};
use substoch::Execution;

/// Integer grid scaled by its largest line sum (or a bit more), so every
/// row and column sum is at most one.
fn substoch(max_n: usize) -> impl Strategy<Value = SubstochMatrix> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0i64..6, n * n), 0i64..4))
        .prop_map(|(n, cells, slack)| {
            let mut biggest = 1;
            for i in 0..n {
                biggest = biggest.max((0..n).map(|j| cells[i * n + j]).sum());
                biggest = biggest.max((0..n).map(|j| cells[j * n + i]).sum());
            }
            let scale = biggest + slack;
            SubstochMatrix::new(n, cells.iter().map(|&c| rat(c, scale)).collect()).unwrap()
        })
}

fn fixed_sum(max_n: usize) -> impl Strategy<Value = SubstochMatrix> {
    (1..=max_n, 0u32..=10, any::<u64>()).prop_map(|(n, tenths, seed)| {
        let s = from_usize(n) * rat(tenths as i64, 10);
        random_fixed_sum(n, &s, &mut sample_rng(seed, 0)).unwrap()
    })
}

fn permutations(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = sample_rng(seed, 1);
        (random_permutation(n, &mut rng), random_permutation(n, &mut rng))
    })
}

fn with_permutations(max_n: usize) -> impl Strategy<Value = (SubstochMatrix, Vec<usize>, Vec<usize>)> {
    substoch(max_n).prop_flat_map(|a| {
        let n = a.n();
        (Just(a), permutations(n)).prop_map(|(a, (p, q))| (a, p, q))
    })
}

fn deficient_nonzero(sums: &[Rational]) -> usize {
    sums.iter().filter(|x| **x > zero() && **x < one()).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn text_round_trip(a in substoch(5)) {
        prop_assert_eq!(parse_matrix(&format_matrix(&a)).unwrap(), a);
    }

    #[test]
    fn sub_defect_matches_completion(a in substoch(4)) {
        let n = a.n();
        let k = a.sub_defect();
        prop_assert_eq!(k, ceil_usize(&(from_usize(n) - a.sigma())));
        let witness = sub_defect_witness(&a, k).expect("completion at the sub-defect");
        prop_assert!(witness.is_doubly_stochastic());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(witness.get(i, j), a.get(i, j));
            }
        }
        if k > 0 {
            prop_assert!(sub_defect_witness(&a, k - 1).is_none());
        }
    }

    #[test]
    fn invariants_under_permutation_and_transpose((a, p, q) in with_permutations(5)) {
        let b = a.permuted(&p, &q).unwrap();
        for c in [&b, &a.transpose()] {
            prop_assert_eq!(c.sigma(), a.sigma());
            prop_assert_eq!(c.sub_defect(), a.sub_defect());
            prop_assert_eq!(max_diagonal(c).0, max_diagonal(&a).0);
            prop_assert_eq!(permanent(c).unwrap(), permanent(&a).unwrap());
            prop_assert_eq!(is_extreme_sum(c).is_extreme(), is_extreme_sum(&a).is_extreme());
        }
    }

    #[test]
    fn forest_edge_count(a in substoch(5)) {
        let graph = SupportGraph::build(&a);
        let components = graph.components();
        let vertices: usize = components.iter().map(|c| c.vertices.len()).sum();
        prop_assert_eq!(vertices, 2 * a.n());
        let edges: usize = components.iter().map(|c| c.edge_count).sum();
        prop_assert_eq!(edges, graph.edges().len());
        prop_assert_eq!(graph.is_forest(), edges + components.len() == vertices);
        prop_assert_eq!(graph.is_forest(), graph.find_cycle().is_none());
    }

    #[test]
    fn peel_decomposition_is_exact(a in fixed_sum(4)) {
        let combo = decompose_fixed_sum(&a);
        prop_assert!(combo.reproduces(&a));
        prop_assert!(combo.len() <= a.n() * a.n() + 1);
        for (weight, term) in &combo.terms {
            prop_assert!(*weight > zero());
            prop_assert_eq!(term.sigma(), a.sigma());
            prop_assert!(is_extreme_sum(term).is_extreme());
        }
    }

    #[test]
    fn split_decomposition_is_exact(a in fixed_sum(3)) {
        let (combo, _) = decompose_fixed_sum_with(&a, DecompositionStrategy::Split, Execution::Sequential);
        prop_assert!(combo.reproduces(&a));
        prop_assert!(combo.terms.iter().all(|(_, t)| is_extreme_sum(t).is_extreme()));
    }

    #[test]
    fn jurkat_ryser_builds_forests(a in substoch(5), column_ties in any::<bool>()) {
        let profile = RowColProfile::new(a.row_sums(), a.col_sums()).unwrap();
        let tie = if column_ties { TieRule::CompleteColumn } else { TieRule::CompleteRow };
        let (built, trace) = jurkat_ryser(&profile, &PivotPolicy::NorthWest, tie).unwrap();
        prop_assert_eq!(built.row_sums(), a.row_sums());
        prop_assert_eq!(built.col_sums(), a.col_sums());
        prop_assert!(SupportGraph::build(&built).is_forest());
        prop_assert_eq!(trace.replay(a.n()).unwrap(), built);
    }

    #[test]
    fn b_matrix_shape(m in 1usize..7, numer in 0i64..=12) {
        let alpha = rat(numer, 12);
        let b = b_matrix(m, &alpha).unwrap();
        prop_assert_eq!(b.sigma(), from_usize(m - 1) + &alpha);
        let mut rows = vec![one(); m];
        rows[0] = alpha.clone();
        let mut cols = vec![one(); m];
        cols[m - 1] = alpha.clone();
        prop_assert_eq!(b.row_sums(), rows);
        prop_assert_eq!(b.col_sums(), cols);
        prop_assert!(is_extreme_sum(&b).is_extreme());
        prop_assert!(SupportGraph::build(&b).is_forest());
    }

    #[test]
    fn vertices_have_one_deficient_line_each_way(n in 1usize..=5, tenths in 0u32..=10, seed in any::<u64>()) {
        let s = from_usize(n) * rat(tenths as i64, 10);
        let v = random_fixed_sum_vertex(n, &s, &mut sample_rng(seed, 2)).unwrap();
        prop_assert!(is_extreme_sum(&v).is_extreme());
        prop_assert!(deficient_nonzero(&v.row_sums()) <= 1);
        prop_assert!(deficient_nonzero(&v.col_sums()) <= 1);
    }

    #[test]
    fn two_deficient_rows_are_never_extreme(a in fixed_sum(4)) {
        if deficient_nonzero(&a.row_sums()) >= 2 || deficient_nonzero(&a.col_sums()) >= 2 {
            prop_assert!(!is_extreme_sum(&a).is_extreme());
        }
    }
}

#[test]
fn integral_vertices_are_partial_permutations() {
    for seed in 0..200 {
        let n = 1 + (seed as usize % 5);
        let s = int((seed % (n as u64 + 1)) as i64);
        let v = random_fixed_sum_vertex(n, &s, &mut sample_rng(seed, 3)).unwrap();
        assert!(v.entries().iter().all(|x| *x == zero() || *x == one()));
    }
}
