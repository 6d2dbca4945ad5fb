//! Convex decomposition into extreme points.
//!
//! A non-extreme matrix is pushed both ways along a direction `D` that keeps
//! every tight constraint tight: around a cycle of the support (all line
//! sums preserved), along a path between two deficient lines of the same
//! kind, or along two row-to-column paths in different components with
//! opposite signs (element sum preserved). Steps are maximal on each side,
//! so every child loses a support entry or saturates a deficient line.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::bigraph::{Cycle, Path, SplittingWitness, SupportGraph, Vertex};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::extremality::{direct_sum, is_extreme_sum, NonExtremeWitness, SumExtremality};
use crate::ratmat::rational::{from_usize, is_integral, one, zero};
use crate::ratmat::{Rational, SubstochMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitMechanism {
    Cycle,
    EvenPath,
    CrossComponent,
}

impl fmt::Display for SplitMechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitMechanism::Cycle => "cycle",
            SplitMechanism::EvenPath => "even-path",
            SplitMechanism::CrossComponent => "cross-component",
        })
    }
}

/// `A = lambda * a1 + (1 - lambda) * a2` with `a1 = A + epsilon_plus * D`
/// and `a2 = A - epsilon_minus * D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub a1: SubstochMatrix,
    pub a2: SubstochMatrix,
    pub lambda: Rational,
    pub epsilon_plus: Rational,
    pub epsilon_minus: Rational,
    pub mechanism: SplitMechanism,
}

/// Signed unit perturbation on a set of cells.
struct Direction {
    cells: Vec<(usize, usize, bool)>,
}

impl Direction {
    fn alternating(edges: &[(usize, usize)], start_positive: bool) -> Self {
        let cells = edges
            .iter()
            .enumerate()
            .map(|(t, &(i, j))| (i, j, (t % 2 == 0) == start_positive))
            .collect();
        Direction { cells }
    }

    fn chain(mut self, other: Direction) -> Self {
        self.cells.extend(other.cells);
        self
    }

    /// Largest `t >= 0` with `A + t * sign * D` substochastic.
    fn max_step(&self, a: &SubstochMatrix, forward: bool) -> Rational {
        let n = a.n();
        let mut row_delta = vec![0i64; n];
        let mut col_delta = vec![0i64; n];
        let mut bound: Option<Rational> = None;
        let mut tighten = |candidate: Rational| {
            if bound.as_ref().is_none_or(|b| candidate < *b) {
                bound = Some(candidate);
            }
        };
        for &(i, j, positive) in &self.cells {
            let up = positive == forward;
            let unit = if up { 1 } else { -1 };
            row_delta[i] += unit;
            col_delta[j] += unit;
            if !up {
                tighten(a.get(i, j).clone());
            }
        }
        for (i, &d) in row_delta.iter().enumerate() {
            if d > 0 {
                tighten((one() - a.row_sum(i)) / from_usize(d as usize));
            }
        }
        for (j, &d) in col_delta.iter().enumerate() {
            if d > 0 {
                tighten((one() - a.col_sum(j)) / from_usize(d as usize));
            }
        }
        bound.expect("a nonzero direction decreases some entry or raises some line")
    }

    fn apply(&self, a: &SubstochMatrix, step: &Rational, forward: bool) -> Result<SubstochMatrix> {
        let n = a.n();
        let mut entries = a.entries().to_vec();
        for &(i, j, positive) in &self.cells {
            if positive == forward {
                entries[i * n + j] += step;
            } else {
                entries[i * n + j] -= step;
            }
        }
        SubstochMatrix::new(n, entries)
    }

    fn split(&self, a: &SubstochMatrix, mechanism: SplitMechanism) -> Result<Split> {
        let epsilon_plus = self.max_step(a, true);
        let epsilon_minus = self.max_step(a, false);
        if !epsilon_plus.is_positive() || !epsilon_minus.is_positive() {
            return Err(Error::InvalidPath(format!(
                "direction is blocked (steps {epsilon_plus}, {epsilon_minus})"
            )));
        }
        let a1 = self.apply(a, &epsilon_plus, true)?;
        let a2 = self.apply(a, &epsilon_minus, false)?;
        let lambda = &epsilon_minus / (&epsilon_plus + &epsilon_minus);
        Ok(Split {
            a1,
            a2,
            lambda,
            epsilon_plus,
            epsilon_minus,
            mechanism,
        })
    }
}

/// Alternating `+/-` around a cycle of the support graph; all line sums are
/// preserved.
pub fn split_cycle(a: &SubstochMatrix, cycle: &Cycle) -> Result<Split> {
    let graph = SupportGraph::build(a);
    if !cycle.is_in(&graph) {
        return Err(Error::NotACycle(cycle.to_string()));
    }
    Direction::alternating(&cycle.edges(), true).split(a, SplitMechanism::Cycle)
}

fn deficient(a: &SubstochMatrix, v: Vertex) -> bool {
    let sum = match v {
        Vertex::Row(i) => a.row_sum(i),
        Vertex::Col(j) => a.col_sum(j),
    };
    sum < Rational::one()
}

/// Alternating `+/-` along a path joining two deficient lines of the same
/// kind (even number of edges); the element sum is preserved.
pub fn split_path(a: &SubstochMatrix, path: &Path) -> Result<Split> {
    let graph = SupportGraph::build(a);
    if !path.is_in(&graph) {
        return Err(Error::InvalidPath(format!("{path} is not a path of the support graph")));
    }
    if path.edge_count() % 2 != 0 {
        return Err(Error::InvalidPath(format!("{path} has an odd number of edges")));
    }
    if !deficient(a, path.first()) || !deficient(a, path.last()) {
        return Err(Error::InvalidPath(format!("{path} has a saturated end line")));
    }
    Direction::alternating(&path.edges(), true).split(a, SplitMechanism::EvenPath)
}

/// Two row-to-column paths in different components, pushed with opposite
/// signs so the element sum is preserved.
pub fn split_cross_component(a: &SubstochMatrix, first: &Path, second: &Path) -> Result<Split> {
    let graph = SupportGraph::build(a);
    for p in [first, second] {
        if !p.is_in(&graph) {
            return Err(Error::InvalidPath(format!("{p} is not a path of the support graph")));
        }
        if p.edge_count() % 2 != 1 {
            return Err(Error::InvalidPath(format!("{p} must join a row to a column")));
        }
        if !deficient(a, p.first()) || !deficient(a, p.last()) {
            return Err(Error::InvalidPath(format!("{p} has a saturated end line")));
        }
    }
    let components = graph.components();
    let component_of = |v: Vertex| components.iter().position(|c| c.vertices.contains(&v));
    if component_of(first.first()) == component_of(second.first()) {
        return Err(Error::InvalidPath(format!("{first} and {second} share a component")));
    }
    Direction::alternating(&first.edges(), true)
        .chain(Direction::alternating(&second.edges(), false))
        .split(a, SplitMechanism::CrossComponent)
}

pub fn split_witness(a: &SubstochMatrix, witness: &NonExtremeWitness) -> Result<Split> {
    match witness {
        NonExtremeWitness::Cycle(c) => split_cycle(a, c),
        NonExtremeWitness::Splitting(SplittingWitness::Columns(p) | SplittingWitness::Rows(p)) => split_path(a, p),
        NonExtremeWitness::Splitting(SplittingWitness::CrossComponent { first, second }) => {
            split_cross_component(a, first, second)
        }
    }
}

/// Weighted list of matrices; weights are positive and sum to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexCombo {
    pub terms: Vec<(Rational, SubstochMatrix)>,
}

impl ConvexCombo {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight_sum(&self) -> Rational {
        self.terms.iter().map(|(w, _)| w).sum()
    }

    pub fn recombine(&self) -> Vec<Rational> {
        let n = self.terms.first().map_or(0, |(_, m)| m.n());
        SubstochMatrix::weighted_sum(n, self.terms.iter().map(|(w, m)| (w, m)))
    }

    /// Weights positive, summing to one, and recombining to `a` exactly.
    pub fn reproduces(&self, a: &SubstochMatrix) -> bool {
        !self.terms.is_empty()
            && self.terms.iter().all(|(w, m)| w.is_positive() && m.n() == a.n())
            && self.weight_sum().is_one()
            && self.recombine() == a.entries()
    }

    fn from_weights(weights: BTreeMap<SubstochMatrix, Rational>) -> Self {
        ConvexCombo {
            terms: weights.into_iter().map(|(m, w)| (w, m)).collect(),
        }
    }
}

impl Serialize for ConvexCombo {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Term<'a>(&'a Rational, &'a SubstochMatrix);
        impl Serialize for Term<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("weight", &self.0.to_string())?;
                map.serialize_entry("matrix", &self.1.to_string_rows())?;
                map.end()
            }
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (w, m) in &self.terms {
            seq.serialize_element(&Term(w, m))?;
        }
        seq.end()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecompositionStats {
    /// Longest chain of splits from the input to a leaf.
    pub depth: usize,
    pub splits: usize,
}

/// `support size + number of nonzero lines with sum below one`; strictly
/// decreases along every split.
pub fn split_potential(a: &SubstochMatrix) -> usize {
    let unit = Rational::one();
    let deficient_lines = a
        .row_sums()
        .into_iter()
        .chain(a.col_sums())
        .filter(|s| s.is_positive() && *s < unit)
        .count();
    a.support_size() + deficient_lines
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DecompositionStrategy {
    /// Walk one-sidedly to an extreme point of the smallest face holding the
    /// matrix, subtract as much of it as possible, repeat on the rest. At
    /// most one term per dimension of the face.
    #[default]
    Peel,
    /// Split into both children and recurse on each, merging equal pieces.
    Split,
}

pub fn decompose_fixed_sum(a: &SubstochMatrix) -> ConvexCombo {
    decompose_fixed_sum_with(a, DecompositionStrategy::Peel, Execution::Sequential).0
}

pub fn decompose_fixed_sum_with(
    a: &SubstochMatrix,
    strategy: DecompositionStrategy,
    exec: Execution,
) -> (ConvexCombo, DecompositionStats) {
    match strategy {
        DecompositionStrategy::Peel => decompose_by_peeling(a),
        DecompositionStrategy::Split => decompose_by_splitting(a, exec),
    }
}

/// `None` when `a` is extreme in `omega_n^s`; cycles are split first.
fn split_once(a: &SubstochMatrix) -> Option<Split> {
    match is_extreme_sum(a) {
        SumExtremality::Extreme(_) => None,
        SumExtremality::NotExtreme(witness) => {
            Some(split_witness(a, &witness).expect("witnesses from the extremality test always split"))
        }
    }
}

/// Follows the `+` side of successive splits. Every split keeps the tight
/// constraints tight, so the extreme point reached lies on the smallest
/// face containing `a`.
fn walk_to_vertex(a: &SubstochMatrix) -> (SubstochMatrix, usize) {
    let mut current = a.clone();
    let mut steps = 0;
    while let Some(split) = split_once(&current) {
        current = split.a1;
        steps += 1;
    }
    (current, steps)
}

/// Largest `lambda` with `(a - lambda * e) / (1 - lambda)` substochastic, for
/// `e` on the smallest face containing `a`.
fn peel_weight(a: &SubstochMatrix, e: &SubstochMatrix) -> Rational {
    let unit = one();
    let mut lambda = unit.clone();
    for (x, y) in a.entries().iter().zip(e.entries()) {
        if y.is_positive() {
            lambda = lambda.min(x / y);
        }
    }
    let lines = a.row_sums().into_iter().zip(e.row_sums()).chain(a.col_sums().into_iter().zip(e.col_sums()));
    for (r, f) in lines {
        if f < unit {
            lambda = lambda.min((&unit - r) / (&unit - f));
        }
    }
    lambda
}

fn decompose_by_peeling(a: &SubstochMatrix) -> (ConvexCombo, DecompositionStats) {
    let n = a.n();
    let mut leaves: BTreeMap<SubstochMatrix, Rational> = BTreeMap::new();
    let mut stats = DecompositionStats::default();
    let mut rest = a.clone();
    let mut remaining = one();
    let mut peeled = 0;
    loop {
        let (vertex, steps) = walk_to_vertex(&rest);
        stats.splits += steps;
        stats.depth = stats.depth.max(peeled + steps);
        if vertex == rest {
            *leaves.entry(vertex).or_insert_with(zero) += remaining;
            break;
        }
        let lambda = peel_weight(&rest, &vertex);
        debug_assert!(lambda.is_positive() && lambda < one());
        let keep = one() - &lambda;
        let entries = rest
            .entries()
            .iter()
            .zip(vertex.entries())
            .map(|(x, y)| (x - &lambda * y) / &keep)
            .collect();
        *leaves.entry(vertex).or_insert_with(zero) += &remaining * &lambda;
        remaining *= keep;
        rest = SubstochMatrix::from_raw_unchecked(n, entries);
        peeled += 1;
    }
    (ConvexCombo::from_weights(leaves), stats)
}

/// Pending matrices are processed in order of decreasing potential, so
/// equal pieces reached along different branches are merged before being
/// split again; each potential level is split in parallel under
/// `Execution::Parallel`.
fn decompose_by_splitting(a: &SubstochMatrix, exec: Execution) -> (ConvexCombo, DecompositionStats) {
    type Pending = BTreeMap<(Reverse<usize>, SubstochMatrix), (Rational, usize)>;
    let mut pending: Pending = BTreeMap::new();
    pending.insert((Reverse(split_potential(a)), a.clone()), (one(), 0));
    let mut leaves: BTreeMap<SubstochMatrix, Rational> = BTreeMap::new();
    let mut stats = DecompositionStats::default();

    while let Some((&(Reverse(level), _), _)) = pending.first_key_value() {
        let mut batch = Vec::new();
        while pending.first_key_value().is_some_and(|((Reverse(p), _), _)| *p == level) {
            let ((_, m), (w, d)) = pending.pop_first().expect("checked nonempty");
            batch.push((m, w, d));
        }
        let outcomes = exec.map(&batch, |(m, _, _)| split_once(m));
        for ((m, w, d), outcome) in batch.into_iter().zip(outcomes) {
            stats.depth = stats.depth.max(d);
            let Some(split) = outcome else {
                *leaves.entry(m).or_insert_with(zero) += w;
                continue;
            };
            stats.splits += 1;
            let parts = [(split.a1, &w * &split.lambda), (split.a2, &w * (one() - &split.lambda))];
            for (child, weight) in parts {
                let key = (Reverse(split_potential(&child)), child);
                debug_assert!(key.0 .0 < level);
                let slot = pending.entry(key).or_insert_with(|| (zero(), 0));
                slot.0 += weight;
                slot.1 = slot.1.max(d + 1);
            }
        }
    }
    (ConvexCombo::from_weights(leaves), stats)
}

/// `A = lambda * upper + (1 - lambda) * lower` for an extreme point with
/// fractional element sum `s`: `upper` replaces `B_m(alpha)` by `B_m(1)`
/// (sum `ceil(s)`), `lower` by `B_m(0)` (sum `floor(s)`), `lambda = alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSplit {
    pub upper: SubstochMatrix,
    pub lower: SubstochMatrix,
    pub lambda: Rational,
}

pub fn split_lambda(a: &SubstochMatrix) -> Result<LambdaSplit> {
    let form = match is_extreme_sum(a) {
        SumExtremality::Extreme(form) => form,
        SumExtremality::NotExtreme(w) => return Err(Error::NotFractionalExtreme(format!("not extreme: {w}"))),
    };
    let Some(alpha) = form.alpha.clone() else {
        return Err(Error::NotFractionalExtreme(format!("element sum {} is integral", a.sigma())));
    };
    let n = a.n();
    let upper = form.unpermute(&direct_sum(n, form.identity_block, form.m, &one()));
    let lower = form.unpermute(&direct_sum(n, form.identity_block, form.m, &zero()));
    Ok(LambdaSplit {
        upper,
        lower,
        lambda: alpha,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnionSide {
    /// `sigma = n - k`: extreme in `omega_n^{n-k}` and a member of the class.
    Interior,
    /// `sigma = n - k + 1`: extreme in `omega_n^{n-k+1}`, a limit point.
    Limit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdefectCombo {
    pub k: usize,
    pub terms: Vec<(Rational, SubstochMatrix, UnionSide)>,
}

impl SubdefectCombo {
    pub fn as_combo(&self) -> ConvexCombo {
        ConvexCombo {
            terms: self.terms.iter().map(|(w, m, _)| (w.clone(), m.clone())).collect(),
        }
    }
}

/// Decomposes over the extreme points of `omega_{n,k}` (`k` the matrix's
/// sub-defect): fixed-sum decomposition, then every fractional term is
/// split between its two integral neighbours.
pub fn decompose_subdefect(a: &SubstochMatrix) -> SubdefectCombo {
    let n = a.n();
    let k = a.sub_defect();
    let mut weights: BTreeMap<SubstochMatrix, Rational> = BTreeMap::new();
    for (w, term) in decompose_fixed_sum(a).terms {
        if is_integral(&term.sigma()) {
            *weights.entry(term).or_insert_with(zero) += w;
        } else {
            let split = split_lambda(&term).expect("fixed-sum leaves are extreme");
            *weights.entry(split.upper).or_insert_with(zero) += &w * &split.lambda;
            *weights.entry(split.lower).or_insert_with(zero) += &w * (one() - &split.lambda);
        }
    }
    let interior = from_usize(n - k);
    let terms = weights
        .into_iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(m, w)| {
            let side = if m.sigma() == interior {
                UnionSide::Interior
            } else {
                UnionSide::Limit
            };
            (w, m, side)
        })
        .collect();
    SubdefectCombo { k, terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::find_splitting_path;
    use crate::extremality::{b_matrix, vertex_oracle, Polytope};
    use crate::ratmat::parse_matrix;
    use crate::ratmat::rational::{int, rat};

    fn ex2() -> SubstochMatrix {
        parse_matrix("0.2 0.4 0 0.4 / 0.4 0 0 0.5 / 0 0.3 0.5 0 / 0.3 0.1 0.5 0.1").unwrap()
    }

    fn check_split(a: &SubstochMatrix, split: &Split) {
        let lambda = &split.lambda;
        let combo = SubstochMatrix::weighted_sum(a.n(), [(lambda, &split.a1), (&(one() - lambda), &split.a2)]);
        assert_eq!(combo, a.entries());
        assert_ne!(split.a1, split.a2);
        assert_eq!(split.a1.sigma(), a.sigma());
        assert_eq!(split.a2.sigma(), a.sigma());
    }

    #[test]
    fn cycle_split_ex2() {
        let cycle = SupportGraph::build(&ex2()).find_cycle().unwrap();
        let split = split_cycle(&ex2(), &cycle).unwrap();
        assert_eq!(split.epsilon_plus, rat(2, 5));
        assert_eq!(split.epsilon_minus, rat(1, 5));
        assert_eq!(split.a1.profile(), ex2().profile());
        assert_eq!(split.a2.profile(), ex2().profile());
        check_split(&ex2(), &split);
    }

    #[test]
    fn grey_cycle_reproduces_displayed_halves() {
        let a = parse_matrix("0.3 0 0.4 0 / 0.2 0.1 0 0.2 / 0 0 0.3 0.2 / 0 0.1 0.1 0.3").unwrap();
        let cycle = Cycle::new(vec![1, 3], vec![1, 3]).unwrap();
        let split = split_cycle(&a, &cycle).unwrap();
        assert_eq!(split.epsilon_plus, rat(1, 10));
        assert_eq!(split.epsilon_minus, rat(1, 10));
        assert_eq!(split.lambda, rat(1, 2));
        let a1 = parse_matrix("0.3 0 0.4 0 / 0.2 0.2 0 0.1 / 0 0 0.3 0.2 / 0 0 0.1 0.4").unwrap();
        let a2 = parse_matrix("0.3 0 0.4 0 / 0.2 0 0 0.3 / 0 0 0.3 0.2 / 0 0.2 0.1 0.2").unwrap();
        assert_eq!(split.a1, a1);
        assert_eq!(split.a2, a2);
    }

    #[test]
    fn cycle_errors() {
        let id = SubstochMatrix::identity(2);
        let cycle = Cycle::new(vec![0, 1], vec![0, 1]).unwrap();
        assert!(matches!(split_cycle(&id, &cycle), Err(Error::NotACycle(_))));
    }

    #[test]
    fn path_split_ex1() {
        let a = parse_matrix("0.2 0.4 / 0.5 0").unwrap();
        let Some(SplittingWitness::Columns(path)) = find_splitting_path(&a) else {
            panic!("expected column path");
        };
        let split = split_path(&a, &path).unwrap();
        assert_eq!(split.epsilon_plus, rat(3, 10));
        assert_eq!(split.epsilon_minus, rat(1, 5));
        assert_eq!(split.a1, parse_matrix("0.5 0.1 / 0.5 0").unwrap());
        assert_eq!(split.a2, parse_matrix("0 0.6 / 0.5 0").unwrap());
        assert_eq!(split.lambda, rat(2, 5));
        check_split(&a, &split);
    }

    #[test]
    fn path_split_ex2_matches_display() {
        let a = ex2();
        let path = Path::new(vec![Vertex::Col(0), Vertex::Row(0), Vertex::Col(3), Vertex::Row(3), Vertex::Col(1)]).unwrap();
        let split = split_path(&a, &path).unwrap();
        assert_eq!(split.epsilon_plus, rat(1, 10));
        assert_eq!(split.epsilon_minus, rat(1, 10));
        assert_eq!(split.lambda, rat(1, 2));
        let a1 = parse_matrix("0.3 0.4 0 0.3 / 0.4 0 0 0.5 / 0 0.3 0.5 0 / 0.3 0 0.5 0.2").unwrap();
        assert_eq!(split.a1, a1);
        check_split(&a, &split);
    }

    #[test]
    fn path_errors() {
        let id = SubstochMatrix::identity(2);
        let p = Path::new(vec![Vertex::Row(0), Vertex::Col(0)]).unwrap();
        assert!(split_path(&id, &p).is_err());
        let a = parse_matrix("1 0 / 0 0.5").unwrap();
        let p = Path::new(vec![Vertex::Row(0), Vertex::Col(0)]).unwrap();
        assert!(split_path(&a, &p).is_err());
    }

    #[test]
    fn cross_component_split_diag() {
        let a = parse_matrix("0.9 0 0 / 0 0.9 0 / 0 0 0.6").unwrap();
        let Some(SplittingWitness::CrossComponent { first, second }) = find_splitting_path(&a) else {
            panic!("expected cross-component pair");
        };
        let split = split_cross_component(&a, &first, &second).unwrap();
        assert_eq!(split.epsilon_plus, rat(1, 10));
        assert_eq!(split.epsilon_minus, rat(1, 10));
        check_split(&a, &split);
        assert!(split_cross_component(&a, &first, &first).is_err());
    }

    #[test]
    fn extreme_input_is_single_term() {
        let b = b_matrix(3, &rat(2, 5)).unwrap();
        let combo = decompose_fixed_sum(&b);
        assert_eq!(combo.terms, vec![(int(1), b)]);
    }

    #[test]
    fn diag_decomposes() {
        let a = parse_matrix("0.9 0 0 / 0 0.9 0 / 0 0 0.6").unwrap();
        for strategy in [DecompositionStrategy::Peel, DecompositionStrategy::Split] {
            let (combo, stats) = decompose_fixed_sum_with(&a, strategy, Execution::Parallel);
            assert!(combo.len() >= 2);
            assert!(combo.reproduces(&a));
            for (_, m) in &combo.terms {
                assert!(is_extreme_sum(m).is_extreme());
                assert!(vertex_oracle(m, Polytope::FixedSum).unwrap());
            }
            assert!(stats.depth <= 15);
        }
    }

    #[test]
    fn peeling_stays_within_dimension_bound() {
        let a = parse_matrix("0.2 0.1 0.3 0.1 / 0.1 0.3 0.1 0.2 / 0.3 0.2 0.1 0.1 / 0.1 0.1 0.2 0.3").unwrap();
        let (peel, stats) = decompose_fixed_sum_with(&a, DecompositionStrategy::Peel, Execution::Sequential);
        assert!(peel.reproduces(&a));
        assert!(peel.len() <= 17);
        assert!(stats.depth <= 24);
        let (split, _) = decompose_fixed_sum_with(&a, DecompositionStrategy::Split, Execution::Sequential);
        assert!(split.reproduces(&a));
    }

    #[test]
    fn doubly_stochastic_gives_permutations() {
        let a = parse_matrix("0.5 0.3 0.2 / 0.2 0.5 0.3 / 0.3 0.2 0.5").unwrap();
        let combo = decompose_fixed_sum(&a);
        assert!(combo.reproduces(&a));
        for (_, m) in &combo.terms {
            assert!(m.is_doubly_stochastic());
            assert!(m.entries().iter().all(|x| x.is_zero() || x.is_one()));
        }
    }

    #[test]
    fn lambda_split_examples() {
        let b = b_matrix(3, &rat(2, 5)).unwrap();
        let s = split_lambda(&b).unwrap();
        assert_eq!(s.lambda, rat(2, 5));
        assert_eq!(s.upper, SubstochMatrix::identity(3));
        assert_eq!(s.lower, b_matrix(3, &zero()).unwrap());

        let a = parse_matrix("1 0 0 / 0 1 0 / 0 0 0.5").unwrap();
        let s = split_lambda(&a).unwrap();
        assert_eq!(s.lambda, rat(1, 2));
        assert_eq!(s.upper, SubstochMatrix::identity(3));
        assert_eq!(s.lower, parse_matrix("1 0 0 / 0 1 0 / 0 0 0").unwrap());

        assert!(split_lambda(&SubstochMatrix::identity(3)).is_err());
        assert!(split_lambda(&parse_matrix("0.2 0.4 / 0.5 0").unwrap()).is_err());
    }

    #[test]
    fn subdefect_combos() {
        let b = b_matrix(3, &rat(2, 5)).unwrap();
        let c = decompose_subdefect(&b);
        assert_eq!(c.k, 1);
        assert_eq!(
            c.terms,
            vec![
                (rat(3, 5), b_matrix(3, &zero()).unwrap(), UnionSide::Interior),
                (rat(2, 5), SubstochMatrix::identity(3), UnionSide::Limit),
            ]
        );
        let id = decompose_subdefect(&SubstochMatrix::identity(3));
        assert_eq!(id.k, 0);
        assert_eq!(id.terms, vec![(int(1), SubstochMatrix::identity(3), UnionSide::Interior)]);

        let a = parse_matrix("0.9 0 0 / 0 0.9 0 / 0 0 0.6").unwrap();
        let c = decompose_subdefect(&a);
        assert!(c.as_combo().reproduces(&a));
        for (_, m, side) in &c.terms {
            let expect = if *side == UnionSide::Interior { int(2) } else { int(3) };
            assert_eq!(m.sigma(), expect);
            assert!(is_extreme_sum(m).is_extreme());
        }
    }

    #[test]
    fn combo_serializes_as_fraction_strings() {
        let combo = decompose_fixed_sum(&parse_matrix("0.2 0.4 / 0.5 0").unwrap());
        let json = serde_json::to_value(&combo).unwrap();
        let first = &json.as_array().unwrap()[0];
        assert!(first["weight"].is_string());
        assert!(first["matrix"][0][0].is_string());
    }
}
