//! Doubly stochastic completion of a substochastic matrix.
//!
//! The completion of `A` to order `n + k` is a bipartite b-matching: every
//! row of the enlarged matrix must receive `1 - (row sum inside A)` and every
//! column likewise, using only cells outside the fixed leading block. The
//! feasibility question is answered with an exact max-flow, independently of
//! the closed-form sub-defect.

use std::collections::VecDeque;

use num_traits::{One, Signed};

use super::matrix::SubstochMatrix;
use super::rational::{one, zero, Rational};

/// Exact Edmonds-Karp on a dense capacity matrix.
pub(crate) struct FlowNetwork {
    capacity: Vec<Vec<Rational>>,
    flow: Vec<Vec<Rational>>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowNetwork {
            capacity: vec![vec![zero(); nodes]; nodes],
            flow: vec![vec![zero(); nodes]; nodes],
        }
    }

    pub(crate) fn add_capacity(&mut self, from: usize, to: usize, cap: Rational) {
        self.capacity[from][to] += cap;
    }

    fn residual(&self, u: usize, v: usize) -> Rational {
        &self.capacity[u][v] - &self.flow[u][v]
    }

    pub(crate) fn flow(&self, u: usize, v: usize) -> &Rational {
        &self.flow[u][v]
    }

    pub(crate) fn max_flow(&mut self, source: usize, sink: usize) -> Rational {
        let nodes = self.capacity.len();
        let mut total = zero();
        loop {
            let mut parent = vec![usize::MAX; nodes];
            parent[source] = source;
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for v in 0..nodes {
                    if parent[v] == usize::MAX && self.residual(u, v).is_positive() {
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if parent[sink] == usize::MAX {
                return total;
            }
            let mut bottleneck: Option<Rational> = None;
            let mut v = sink;
            while v != source {
                let u = parent[v];
                let r = self.residual(u, v);
                bottleneck = Some(match bottleneck {
                    Some(b) if b <= r => b,
                    _ => r,
                });
                v = u;
            }
            let bottleneck = bottleneck.expect("augmenting path has at least one edge");
            let mut v = sink;
            while v != source {
                let u = parent[v];
                self.flow[u][v] += &bottleneck;
                self.flow[v][u] -= &bottleneck;
                v = u;
            }
            total += bottleneck;
        }
    }
}

/// An `(n+k) x (n+k)` doubly stochastic matrix with `A` as its leading
/// principal block, or `None` when no such completion exists.
pub fn sub_defect_witness(a: &SubstochMatrix, k: usize) -> Option<SubstochMatrix> {
    let n = a.n();
    let order = n + k;
    let source = 0;
    let row_node = |u: usize| 1 + u;
    let col_node = |v: usize| 1 + order + v;
    let sink = 1 + 2 * order;
    let mut network = FlowNetwork::new(2 * order + 2);

    let rows = a.row_sums();
    let cols = a.col_sums();
    let mut demand = zero();
    for u in 0..order {
        let need = if u < n { one() - &rows[u] } else { one() };
        demand += &need;
        network.add_capacity(source, row_node(u), need);
    }
    for v in 0..order {
        let need = if v < n { one() - &cols[v] } else { one() };
        network.add_capacity(col_node(v), sink, need);
    }
    for u in 0..order {
        for v in 0..order {
            if u >= n || v >= n {
                network.add_capacity(row_node(u), col_node(v), one());
            }
        }
    }

    if network.max_flow(source, sink) != demand {
        return None;
    }
    let mut entries = Vec::with_capacity(order * order);
    for u in 0..order {
        for v in 0..order {
            if u < n && v < n {
                entries.push(a.get(u, v).clone());
            } else {
                let f = network.flow(row_node(u), col_node(v)).clone();
                debug_assert!(!f.is_negative() && f <= Rational::one());
                entries.push(f);
            }
        }
    }
    let completion = SubstochMatrix::from_raw_unchecked(order, entries);
    debug_assert!(completion.is_doubly_stochastic());
    Some(completion)
}

/// Smallest `k` admitting a completion, found by scanning `k = 0..=n`.
pub fn minimal_completion_order(a: &SubstochMatrix) -> usize {
    (0..=a.n())
        .find(|&k| sub_defect_witness(a, k).is_some())
        .expect("the zero-padded order-2n completion always exists")
}
