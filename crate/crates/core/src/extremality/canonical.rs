use std::fmt;

use num_traits::{One, Zero};

use crate::bigraph::{ComponentKind, SupportGraph, Vertex};
use crate::error::{Error, Result};
use crate::ratmat::rational::{ceil_usize, from_usize, is_integral, one, zero};
use crate::ratmat::{Rational, SubstochMatrix};

/// `B_m(alpha)`: `alpha` on the diagonal, `1 - alpha` on the subdiagonal.
/// Row sums are `(alpha, 1, ..., 1)`, column sums `(1, ..., 1, alpha)` and
/// the element sum is `m - 1 + alpha`.
pub fn b_matrix(m: usize, alpha: &Rational) -> Result<SubstochMatrix> {
    if m == 0 {
        return Err(Error::Precondition("B_m requires m >= 1".into()));
    }
    if *alpha < Rational::zero() || *alpha > Rational::one() {
        return Err(Error::AlphaOutOfRange(alpha.clone()));
    }
    let mut entries = vec![zero(); m * m];
    for i in 0..m {
        entries[i * m + i] = alpha.clone();
        if i > 0 {
            entries[i * m + i - 1] = one() - alpha;
        }
    }
    SubstochMatrix::new(m, entries)
}

/// Permutations bringing a matrix to `I_p (+) B_m(alpha) (+) O_q`, where
/// `p = identity_block` and `q = zero_block`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// `row_perm[t]` is the source row placed at position `t`.
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub identity_block: usize,
    /// Size of the `B` block; zero when the element sum is integral.
    pub m: usize,
    /// `s + 1 - ceil(s)` when a `B` block is present.
    pub alpha: Option<Rational>,
    pub zero_block: usize,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.identity_block + self.m + self.zero_block
    }

    /// The block-diagonal target `I (+) B_m(alpha) (+) O`.
    pub fn target(&self) -> SubstochMatrix {
        let alpha = self.alpha.clone().unwrap_or_else(one);
        direct_sum(self.n(), self.identity_block, self.m, &alpha)
    }

    /// Maps a block-diagonal matrix back to the source coordinates.
    pub(crate) fn unpermute(&self, block: &SubstochMatrix) -> SubstochMatrix {
        let n = self.n();
        let mut entries = vec![zero(); n * n];
        for (t, &r) in self.row_perm.iter().enumerate() {
            for (u, &c) in self.col_perm.iter().enumerate() {
                entries[r * n + c] = block.get(t, u).clone();
            }
        }
        SubstochMatrix::from_raw_unchecked(n, entries)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "I_{}", self.identity_block)?;
        if let Some(alpha) = &self.alpha {
            write!(f, " + B_{}({alpha})", self.m)?;
        }
        write!(
            f,
            " + O_{} (rows [{}], cols [{}])",
            self.zero_block,
            one_based(&self.row_perm),
            one_based(&self.col_perm)
        )
    }
}

/// `I_p (+) B_m(alpha) (+) O` of order `n`; `m = 0` omits the `B` block.
pub(crate) fn direct_sum(n: usize, identity: usize, m: usize, alpha: &Rational) -> SubstochMatrix {
    assert!(identity + m <= n);
    let mut entries = vec![zero(); n * n];
    for i in 0..identity {
        entries[i * n + i] = one();
    }
    for t in 0..m {
        let i = identity + t;
        entries[i * n + i] = alpha.clone();
        if t > 0 {
            entries[i * n + i - 1] = one() - alpha;
        }
    }
    SubstochMatrix::from_raw_unchecked(n, entries)
}

/// Recognizes `P A Q = I_{ceil(s)-m} (+) B_m(s+1-ceil(s)) (+) O_{n-ceil(s)}`.
///
/// Succeeds iff every nontrivial support component is either a single
/// weight-one edge or (for fractional `s`, exactly once) a chain from the
/// deficient row to the deficient column with weights alternating
/// `alpha, 1 - alpha`.
pub fn recognize_canonical(a: &SubstochMatrix) -> Option<CanonicalForm> {
    let n = a.n();
    let s = a.sigma();
    let profile = a.profile();
    if !profile.is_rearranged_canonical() {
        return None;
    }
    let graph = SupportGraph::build(a);
    let unit = Rational::one();
    let mut unit_pairs = Vec::new();
    let mut chain: Option<(Vec<usize>, Vec<usize>)> = None;
    for component in graph.components() {
        match component.kind {
            ComponentKind::IsolatedVertex => {}
            ComponentKind::Path if component.edge_count == 1 => {
                let (Vertex::Row(i), Vertex::Col(j)) = (component.vertices[0], component.vertices[1]) else {
                    unreachable!("sorted component lists rows first");
                };
                if *a.get(i, j) == unit {
                    unit_pairs.push((i, j));
                } else if chain.replace((vec![i], vec![j])).is_some() {
                    return None;
                }
            }
            ComponentKind::Path => {
                let walk = walk_chain(a, &graph, &component.vertices)?;
                if chain.replace(walk).is_some() {
                    return None;
                }
            }
            ComponentKind::CycleBearing | ComponentKind::OtherTree => return None,
        }
    }

    let top = ceil_usize(&s);
    let (m, alpha) = match (&chain, is_integral(&s)) {
        (None, true) => (0, None),
        (Some((rows, _)), false) => (rows.len(), Some(&s + one() - from_usize(top))),
        _ => return None,
    };
    if unit_pairs.len() + m != top {
        return None;
    }

    let mut row_perm: Vec<usize> = unit_pairs.iter().map(|&(i, _)| i).collect();
    let mut col_perm: Vec<usize> = unit_pairs.iter().map(|&(_, j)| j).collect();
    if let Some((rows, cols)) = &chain {
        row_perm.extend(rows);
        col_perm.extend(cols);
    }
    let mut used_rows = vec![false; n];
    let mut used_cols = vec![false; n];
    row_perm.iter().for_each(|&r| used_rows[r] = true);
    col_perm.iter().for_each(|&c| used_cols[c] = true);
    row_perm.extend((0..n).filter(|&r| !used_rows[r]));
    col_perm.extend((0..n).filter(|&c| !used_cols[c]));

    let form = CanonicalForm {
        row_perm,
        col_perm,
        identity_block: top - m,
        m,
        alpha,
        zero_block: n - top,
    };
    (a.permuted_unchecked(&form.row_perm, &form.col_perm) == form.target()).then_some(form)
}

/// Walks a path component from its deficient row end, returning the chain
/// rows and columns in `B_m` order.
fn walk_chain(a: &SubstochMatrix, graph: &SupportGraph, vertices: &[Vertex]) -> Option<(Vec<usize>, Vec<usize>)> {
    let unit = Rational::one();
    let start = vertices
        .iter()
        .copied()
        .find(|&v| matches!(v, Vertex::Row(i) if graph.degree(v) == 1 && a.row_sum(i) < unit))?;
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    let mut prev: Option<Vertex> = None;
    let mut cur = start;
    loop {
        match cur {
            Vertex::Row(i) => rows.push(i),
            Vertex::Col(j) => cols.push(j),
        }
        let next = graph.neighbors(cur).find(|&w| Some(w) != prev);
        match next {
            Some(w) => {
                prev = Some(cur);
                cur = w;
            }
            None => break,
        }
    }
    (rows.len() == cols.len()).then_some((rows, cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::parse_matrix;
    use crate::ratmat::rational::rat;

    #[test]
    fn b_matrix_examples() {
        let b1 = b_matrix(1, &rat(2, 5)).unwrap();
        assert_eq!(b1.entries(), &[rat(2, 5)]);
        let b3 = b_matrix(3, &rat(2, 5)).unwrap();
        assert_eq!(b3, parse_matrix("2/5 0 0 / 3/5 2/5 0 / 0 3/5 2/5").unwrap());
        assert_eq!(b_matrix(2, &one()).unwrap(), SubstochMatrix::identity(2));
        assert!(matches!(b_matrix(2, &rat(3, 2)), Err(Error::AlphaOutOfRange(_))));
        assert!(b_matrix(0, &one()).is_err());
    }

    #[test]
    fn b4_is_already_canonical() {
        let b = b_matrix(4, &rat(3, 5)).unwrap();
        let form = recognize_canonical(&b).unwrap();
        assert_eq!(form.identity_block, 0);
        assert_eq!(form.m, 4);
        assert_eq!(form.alpha, Some(rat(3, 5)));
        assert_eq!(form.row_perm, vec![0, 1, 2, 3]);
    }

    #[test]
    fn reversed_rows_example() {
        let a = parse_matrix("0 0.6 0.4 / 0.6 0.4 0 / 0.4 0 0").unwrap();
        let form = recognize_canonical(&a).unwrap();
        assert_eq!(form.row_perm, vec![2, 1, 0]);
        assert_eq!(form.col_perm, vec![0, 1, 2]);
        assert_eq!(form.m, 3);
        assert_eq!(form.alpha, Some(rat(2, 5)));
        assert_eq!(form.unpermute(&form.target()), a);
    }

    #[test]
    fn diag_is_not_canonical() {
        assert_eq!(recognize_canonical(&parse_matrix("0.9 0 0 / 0 0.9 0 / 0 0 0.6").unwrap()), None);
    }

    #[test]
    fn integral_sums_have_no_b_block() {
        let p = SubstochMatrix::partial_permutation(&[Some(2), None, Some(0)]).unwrap();
        let form = recognize_canonical(&p).unwrap();
        assert_eq!((form.identity_block, form.m, form.zero_block), (2, 0, 1));
        assert_eq!(form.alpha, None);
        let z = recognize_canonical(&SubstochMatrix::zero(3)).unwrap();
        assert_eq!((z.identity_block, z.m, z.zero_block), (0, 0, 3));
    }

    #[test]
    fn single_fractional_entry() {
        let a = parse_matrix("0 0 / 0.3 0").unwrap();
        let form = recognize_canonical(&a).unwrap();
        assert_eq!((form.identity_block, form.m, form.zero_block), (0, 1, 1));
        assert_eq!(form.row_perm, vec![1, 0]);
    }
}
