//! Bipartite support graph of a matrix: rows and columns are vertices, every
//! positive entry is an edge.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{One, Zero};

use crate::ratmat::{Rational, SubstochMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Row(usize),
    Col(usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Row(i) => write!(f, "i{}", i + 1),
            Vertex::Col(j) => write!(f, "j{}", j + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub row: usize,
    pub col: usize,
    pub weight: Rational,
}

#[derive(Clone, Debug)]
pub struct SupportGraph {
    n: usize,
    edges: Vec<Edge>,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
}

impl SupportGraph {
    pub fn build(a: &SubstochMatrix) -> Self {
        let n = a.n();
        let mut edges = Vec::new();
        let mut row_adj = vec![Vec::new(); n];
        let mut col_adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                let w = a.get(i, j);
                if !w.is_zero() {
                    edges.push(Edge {
                        row: i,
                        col: j,
                        weight: w.clone(),
                    });
                    row_adj[i].push(j);
                    col_adj[j].push(i);
                }
            }
        }
        SupportGraph {
            n,
            edges,
            row_adj,
            col_adj,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n
    }

    pub fn has_edge(&self, row: usize, col: usize) -> bool {
        self.row_adj[row].binary_search(&col).is_ok()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let (list, wrap): (&[usize], fn(usize) -> Vertex) = match v {
            Vertex::Row(i) => (&self.row_adj[i], Vertex::Col),
            Vertex::Col(j) => (&self.col_adj[j], Vertex::Row),
        };
        list.iter().map(move |&x| wrap(x))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        match v {
            Vertex::Row(i) => self.row_adj[i].len(),
            Vertex::Col(j) => self.col_adj[j].len(),
        }
    }

    fn index(&self, v: Vertex) -> usize {
        match v {
            Vertex::Row(i) => i,
            Vertex::Col(j) => self.n + j,
        }
    }

    fn vertices(&self) -> impl Iterator<Item = Vertex> {
        let n = self.n;
        (0..n).map(Vertex::Row).chain((0..n).map(Vertex::Col))
    }

    /// A simple cycle found by lowest-index depth-first search, or `None`
    /// when the graph is a forest.
    pub fn find_cycle(&self) -> Option<Cycle> {
        let total = self.vertex_count();
        let mut visited = vec![false; total];
        let mut parent: Vec<Option<Vertex>> = vec![None; total];
        for root in self.vertices() {
            if visited[self.index(root)] {
                continue;
            }
            visited[self.index(root)] = true;
            // (vertex, next neighbor position)
            let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
            while let Some(&mut (u, ref mut pos)) = stack.last_mut() {
                let next = self.neighbors(u).nth(*pos);
                *pos += 1;
                let Some(w) = next else {
                    stack.pop();
                    continue;
                };
                if Some(w) == parent[self.index(u)] {
                    continue;
                }
                if visited[self.index(w)] {
                    // back edge to an ancestor on the stack
                    let start = stack
                        .iter()
                        .position(|&(x, _)| x == w)
                        .expect("back edges in undirected DFS reach an ancestor");
                    let ring: Vec<Vertex> = stack[start..].iter().map(|&(x, _)| x).collect();
                    return Some(Cycle::from_ring(ring));
                }
                visited[self.index(w)] = true;
                parent[self.index(w)] = Some(u);
                stack.push((w, 0));
            }
        }
        None
    }

    pub fn is_forest(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Connected components in order of their lowest vertex (rows first).
    pub fn components(&self) -> Vec<Component> {
        let total = self.vertex_count();
        let mut seen = vec![false; total];
        let mut out = Vec::new();
        for root in self.vertices() {
            if seen[self.index(root)] {
                continue;
            }
            seen[self.index(root)] = true;
            let mut queue = VecDeque::from([root]);
            let mut vertices = Vec::new();
            while let Some(u) = queue.pop_front() {
                vertices.push(u);
                for w in self.neighbors(u) {
                    if !seen[self.index(w)] {
                        seen[self.index(w)] = true;
                        queue.push_back(w);
                    }
                }
            }
            vertices.sort();
            let degree_sum: usize = vertices.iter().map(|&v| self.degree(v)).sum();
            let edge_count = degree_sum / 2;
            let kind = if edge_count == 0 {
                ComponentKind::IsolatedVertex
            } else if edge_count >= vertices.len() {
                ComponentKind::CycleBearing
            } else if vertices.iter().all(|&v| self.degree(v) <= 2) {
                ComponentKind::Path
            } else {
                ComponentKind::OtherTree
            };
            out.push(Component {
                vertices,
                edge_count,
                kind,
            });
        }
        out
    }

    /// Shortest path between two vertices (lowest-index breadth-first order).
    pub fn path_between(&self, from: Vertex, to: Vertex) -> Option<Path> {
        let total = self.vertex_count();
        let mut parent: Vec<Option<Vertex>> = vec![None; total];
        let mut seen = vec![false; total];
        seen[self.index(from)] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut seq = vec![to];
                let mut cur = to;
                while let Some(p) = parent[self.index(cur)] {
                    seq.push(p);
                    cur = p;
                }
                seq.reverse();
                return Some(Path { vertices: seq });
            }
            for w in self.neighbors(u) {
                if !seen[self.index(w)] {
                    seen[self.index(w)] = true;
                    parent[self.index(w)] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Edge list dump: one `i<k> j<l> weight` line per edge, 1-based.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&format!("i{} j{} {}\n", e.row + 1, e.col + 1, e.weight));
        }
        out
    }
}

/// Cycle `i1 - j1 - i2 - j2 - ... - ik - jk - i1`, stored as its row and
/// column vertices in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Cycle {
    /// `rows[t]` is adjacent to `cols[t]` and `cols[t]` to `rows[t+1]`.
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Option<Self> {
        if rows.len() < 2 || rows.len() != cols.len() {
            return None;
        }
        let distinct = |v: &[usize]| {
            let mut s = v.to_vec();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        };
        if !distinct(&rows) || !distinct(&cols) {
            return None;
        }
        Some(Cycle { rows, cols })
    }

    fn from_ring(mut ring: Vec<Vertex>) -> Self {
        if let Some(pos) = ring.iter().position(|v| matches!(v, Vertex::Row(_))) {
            ring.rotate_left(pos);
        }
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        for v in ring {
            match v {
                Vertex::Row(i) => rows.push(i),
                Vertex::Col(j) => cols.push(j),
            }
        }
        Cycle { rows, cols }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// Edges in order `(i1,j1), (i2,j1), (i2,j2), ..., (ik,jk), (i1,jk)`;
    /// even positions carry `+`, odd positions `-` in a cycle perturbation.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.rows.len();
        let mut out = Vec::with_capacity(2 * k);
        for t in 0..k {
            out.push((self.rows[t], self.cols[t]));
            out.push((self.rows[(t + 1) % k], self.cols[t]));
        }
        out
    }

    pub fn is_in(&self, graph: &SupportGraph) -> bool {
        self.rows.iter().all(|&r| r < graph.n())
            && self.cols.iter().all(|&c| c < graph.n())
            && self.edges().iter().all(|&(r, c)| graph.has_edge(r, c))
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, (&r, &c)) in self.rows.iter().zip(&self.cols).enumerate() {
            if t > 0 {
                write!(f, "-")?;
            }
            write!(f, "i{}-j{}", r + 1, c + 1)?;
        }
        write!(f, "-i{}", self.rows[0] + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Row,
    Column,
}

/// Simple path in the support graph, as its alternating vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    /// Validates alternation and distinctness; adjacency is checked by
    /// [`Path::is_in`].
    pub fn new(vertices: Vec<Vertex>) -> Option<Self> {
        if vertices.len() < 2 {
            return None;
        }
        let alternates = vertices.windows(2).all(|w| {
            matches!(
                (w[0], w[1]),
                (Vertex::Row(_), Vertex::Col(_)) | (Vertex::Col(_), Vertex::Row(_))
            )
        });
        let mut sorted = vertices.clone();
        sorted.sort();
        let distinct = sorted.windows(2).all(|w| w[0] != w[1]);
        (alternates && distinct).then_some(Path { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().expect("paths are nonempty")
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    /// `(row, col)` of each edge in traversal order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.vertices
            .windows(2)
            .map(|w| match (w[0], w[1]) {
                (Vertex::Row(i), Vertex::Col(j)) | (Vertex::Col(j), Vertex::Row(i)) => (i, j),
                _ => unreachable!("validated alternation"),
            })
            .collect()
    }

    /// Row when the first two edges share a row vertex, column when they
    /// share a column vertex, `None` for single-edge paths.
    pub fn start_direction(&self) -> Option<Direction> {
        (self.edge_count() >= 2).then(|| direction_of(self.vertices[1]))
    }

    pub fn end_direction(&self) -> Option<Direction> {
        (self.edge_count() >= 2).then(|| direction_of(self.vertices[self.vertices.len() - 2]))
    }

    pub fn reversed(&self) -> Path {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Path { vertices }
    }

    /// The same path read in the transposed matrix.
    pub fn transposed(&self) -> Path {
        let vertices = self
            .vertices
            .iter()
            .map(|v| match *v {
                Vertex::Row(i) => Vertex::Col(i),
                Vertex::Col(j) => Vertex::Row(j),
            })
            .collect();
        Path { vertices }
    }

    pub fn is_in(&self, graph: &SupportGraph) -> bool {
        self.edges()
            .iter()
            .all(|&(r, c)| r < graph.n() && c < graph.n() && graph.has_edge(r, c))
    }
}

fn direction_of(shared: Vertex) -> Direction {
    match shared {
        Vertex::Row(_) => Direction::Row,
        Vertex::Col(_) => Direction::Column,
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    IsolatedVertex,
    /// Tree with no vertex of degree 3 or more (a single edge included).
    Path,
    CycleBearing,
    OtherTree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<Vertex>,
    pub edge_count: usize,
    pub kind: ComponentKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePerturbability {
    pub row: usize,
    pub col: usize,
    pub row_perturbable: bool,
    pub column_perturbable: bool,
}

impl EdgePerturbability {
    pub fn perturbable(&self) -> bool {
        self.row_perturbable && self.column_perturbable
    }
}

/// One record per support edge: row (column) perturbable iff the row
/// (column) sum is strictly below one.
pub fn perturbability(a: &SubstochMatrix) -> Vec<EdgePerturbability> {
    let rows = a.row_sums();
    let cols = a.col_sums();
    let unit = Rational::one();
    SupportGraph::build(a)
        .edges()
        .iter()
        .map(|e| EdgePerturbability {
            row: e.row,
            col: e.col,
            row_perturbable: rows[e.row] < unit,
            column_perturbable: cols[e.col] < unit,
        })
        .collect()
}

/// Configuration along which a matrix can be pushed both ways while keeping
/// its element sum and staying substochastic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplittingWitness {
    /// Path joining two unsaturated columns; it starts and ends in row
    /// direction and both end edges are column perturbable.
    Columns(Path),
    /// Path joining two unsaturated rows; starts and ends in column direction.
    Rows(Path),
    /// Two paths in distinct components, each joining an unsaturated row to
    /// an unsaturated column.
    CrossComponent { first: Path, second: Path },
}

impl fmt::Display for SplittingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplittingWitness::Columns(p) => write!(f, "path {p} (column-perturbable ends)"),
            SplittingWitness::Rows(p) => write!(f, "path {p} (row-perturbable ends)"),
            SplittingWitness::CrossComponent { first, second } => {
                write!(f, "paths {first} | {second} (cross-component)")
            }
        }
    }
}

/// Searches, in order: two unsaturated columns in one component, two
/// unsaturated rows in one component, then two components each holding an
/// unsaturated row and an unsaturated column. Intended for forests; for a
/// forest support, `None` means the matrix is extreme in its element-sum
/// slice.
pub fn find_splitting_path(a: &SubstochMatrix) -> Option<SplittingWitness> {
    let graph = SupportGraph::build(a);
    let unit = Rational::one();
    let rows = a.row_sums();
    let cols = a.col_sums();
    let deficient = |v: &Vertex| match *v {
        Vertex::Row(i) => graph.row_adj[i].len() > 0 && rows[i] < unit,
        Vertex::Col(j) => graph.col_adj[j].len() > 0 && cols[j] < unit,
    };
    let components = graph.components();
    let tagged: Vec<(Vec<Vertex>, Vec<Vertex>)> = components
        .iter()
        .map(|c| {
            let (r, k): (Vec<Vertex>, Vec<Vertex>) = c
                .vertices
                .iter()
                .copied()
                .filter(deficient)
                .partition(|v| matches!(v, Vertex::Row(_)));
            (r, k)
        })
        .collect();

    for (_, deficient_cols) in &tagged {
        if let [a, b, ..] = deficient_cols.as_slice() {
            let path = graph.path_between(*a, *b).expect("same component");
            return Some(SplittingWitness::Columns(path));
        }
    }
    for (deficient_rows, _) in &tagged {
        if let [a, b, ..] = deficient_rows.as_slice() {
            let path = graph.path_between(*a, *b).expect("same component");
            return Some(SplittingWitness::Rows(path));
        }
    }
    let mut mixed = tagged
        .iter()
        .filter(|(r, c)| !r.is_empty() && !c.is_empty())
        .map(|(r, c)| graph.path_between(r[0], c[0]).expect("same component"));
    match (mixed.next(), mixed.next()) {
        (Some(first), Some(second)) => Some(SplittingWitness::CrossComponent { first, second }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::parse_matrix;

    pub(crate) fn ex2() -> SubstochMatrix {
        parse_matrix(
            "0.2 0.4 0 0.4
             0.4 0 0 0.5
             0 0.3 0.5 0
             0.3 0.1 0.5 0.1",
        )
        .unwrap()
    }

    fn path_example() -> SubstochMatrix {
        parse_matrix("0 0.6 0.4 / 0.6 0.4 0 / 0.4 0 0").unwrap()
    }

    fn diag() -> SubstochMatrix {
        parse_matrix("0.9 0 0 / 0 0.9 0 / 0 0 0.6").unwrap()
    }

    #[test]
    fn build_counts_edges() {
        let z = SupportGraph::build(&SubstochMatrix::zero(3));
        assert!(z.edges().is_empty());
        assert_eq!(z.components().len(), 6);
        assert_eq!(SupportGraph::build(&ex2()).edges().len(), 11);
        let d = SupportGraph::build(&diag());
        let pairs: Vec<_> = d.edges().iter().map(|e| (e.row, e.col)).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn cycle_in_ex2() {
        let cycle = SupportGraph::build(&ex2()).find_cycle().unwrap();
        let mut rows = cycle.rows().to_vec();
        let mut cols = cycle.cols().to_vec();
        rows.sort();
        cols.sort();
        assert_eq!(rows, vec![0, 1]);
        assert_eq!(cols, vec![0, 3]);
        assert_eq!(cycle.edges(), vec![(0, 0), (1, 0), (1, 3), (0, 3)]);
    }

    #[test]
    fn forests_have_no_cycle() {
        assert!(SupportGraph::build(&diag()).find_cycle().is_none());
        assert!(SupportGraph::build(&path_example()).find_cycle().is_none());
    }

    #[test]
    fn component_kinds() {
        let d = SupportGraph::build(&diag()).components();
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|c| c.kind == ComponentKind::Path && c.edge_count == 1));
        let e = SupportGraph::build(&ex2()).components();
        assert!(e.iter().any(|c| c.kind == ComponentKind::CycleBearing));
        let p = SupportGraph::build(&path_example()).components();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].kind, ComponentKind::Path);
        assert_eq!(p[0].vertices.len(), 6);
        let star = parse_matrix("0.3 0.3 0.3 / 0 0 0 / 0 0 0").unwrap();
        let kinds: Vec<_> = SupportGraph::build(&star).components().iter().map(|c| c.kind).collect();
        assert_eq!(kinds[0], ComponentKind::OtherTree);
        assert_eq!(kinds.iter().filter(|k| **k == ComponentKind::IsolatedVertex).count(), 2);
    }

    #[test]
    fn perturbability_ex1() {
        let a = parse_matrix("0.2 0.4 / 0.5 0").unwrap();
        let p = perturbability(&a);
        let flags: Vec<_> = p.iter().map(|e| (e.row, e.col, e.row_perturbable, e.column_perturbable)).collect();
        // every line of this matrix is deficient
        assert_eq!(flags, vec![(0, 0, true, true), (0, 1, true, true), (1, 0, true, true)]);
        assert!(perturbability(&SubstochMatrix::identity(3))
            .iter()
            .all(|e| !e.row_perturbable && !e.column_perturbable));
    }

    #[test]
    fn perturbability_b3() {
        let b = parse_matrix("0.4 0 0 / 0.6 0.4 0 / 0 0.6 0.4").unwrap();
        let p = perturbability(&b);
        let rows: Vec<_> = p.iter().filter(|e| e.row_perturbable).map(|e| (e.row, e.col)).collect();
        let cols: Vec<_> = p.iter().filter(|e| e.column_perturbable).map(|e| (e.row, e.col)).collect();
        assert_eq!(rows, vec![(0, 0)]);
        assert_eq!(cols, vec![(2, 2)]);
    }

    #[test]
    fn splitting_path_ex1() {
        let a = parse_matrix("0.2 0.4 / 0.5 0").unwrap();
        let w = find_splitting_path(&a).unwrap();
        let SplittingWitness::Columns(path) = w else {
            panic!("expected a column-ended path, got {w:?}");
        };
        assert_eq!(path.vertices(), &[Vertex::Col(0), Vertex::Row(0), Vertex::Col(1)]);
        assert_eq!(path.start_direction(), Some(Direction::Row));
        assert_eq!(path.end_direction(), Some(Direction::Row));
    }

    #[test]
    fn no_splitting_path_for_extreme_points() {
        assert_eq!(find_splitting_path(&path_example()), None);
        assert_eq!(find_splitting_path(&SubstochMatrix::identity(3)), None);
    }

    #[test]
    fn cross_component_for_diag() {
        match find_splitting_path(&diag()).unwrap() {
            SplittingWitness::CrossComponent { first, second } => {
                assert_eq!(first.vertices(), &[Vertex::Row(0), Vertex::Col(0)]);
                assert_eq!(second.vertices(), &[Vertex::Row(1), Vertex::Col(1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dump_format() {
        let a = parse_matrix("0.2 0.4 / 0.5 0").unwrap();
        assert_eq!(SupportGraph::build(&a).dump(), "i1 j1 1/5\ni1 j2 2/5\ni2 j1 1/2\n");
    }

    #[test]
    fn path_validation() {
        assert!(Path::new(vec![Vertex::Row(0), Vertex::Row(1)]).is_none());
        assert!(Path::new(vec![Vertex::Row(0), Vertex::Col(0), Vertex::Row(0)]).is_none());
        let p = Path::new(vec![Vertex::Row(0), Vertex::Col(1)]).unwrap();
        assert_eq!(p.start_direction(), None);
        assert!(Cycle::new(vec![0, 0], vec![1, 2]).is_none());
    }
}
