//! 4-uniform hypergraphs, their biadjacency matrices and canonical forms.
//!
//! Vertices are 0-based in code. A hypergraph's biadjacency matrix has one row
//! per edge and one column per vertex; rows are stored as bitmasks with column
//! 0 in the most significant of the `n_vertices` bits, so comparing rows as
//! integers compares them as big-endian bit strings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

/// Largest supported vertex count (rows are `u64` bitmasks).
pub const MAX_VERTICES: usize = 64;

pub type Edge = [usize; 4];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("vertex count {0} outside 1..={MAX_VERTICES}")]
    VertexCount(usize),
    #[error("edge {edge:?} has a vertex outside 0..{n}")]
    VertexOutOfRange { edge: Edge, n: usize },
    #[error("edge {0:?} repeats a vertex")]
    RepeatedVertex(Edge),
    #[error("edge {0:?} occurs twice")]
    DuplicateEdge(Edge),
    #[error("cannot enumerate {n_vertices} vertices with {n_edges} edges: {reason}")]
    Parameters {
        n_vertices: usize,
        n_edges: usize,
        reason: &'static str,
    },
    #[error("matrix text, line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n_vertices: usize,
    edges: Vec<Edge>,
}

impl Hypergraph {
    /// Each edge is sorted ascending and the edge list is sorted.
    pub fn new(n_vertices: usize, edges: Vec<Edge>) -> Result<Self, HypergraphError> {
        if n_vertices == 0 || n_vertices > MAX_VERTICES {
            return Err(HypergraphError::VertexCount(n_vertices));
        }
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            if e.iter().any(|&v| v >= n_vertices) {
                return Err(HypergraphError::VertexOutOfRange { edge: e, n: n_vertices });
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(HypergraphError::RepeatedVertex(e));
            }
            out.push(e);
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(HypergraphError::DuplicateEdge(w[0]));
        }
        Ok(Self { n_vertices, edges: out })
    }

    /// Same as [`Hypergraph::new`] with 1-based vertex labels.
    pub fn from_one_based(n_vertices: usize, edges: &[Edge]) -> Result<Self, HypergraphError> {
        let shifted = edges
            .iter()
            .map(|e| e.map(|v| v.wrapping_sub(1)))
            .collect();
        Self::new(n_vertices, shifted)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_vertices];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }

    /// True when every vertex lies in some edge, as required for a
    /// cross-ratio degree problem.
    pub fn is_valid_for_degree(&self) -> bool {
        self.degrees().iter().all(|&d| d > 0)
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n_vertices);
        let edges = self.edges.iter().map(|e| e.map(|v| perm[v])).collect();
        Self::new(self.n_vertices, edges).expect("relabeling by a permutation stays well-formed")
    }

    /// Relabels vertices by nonincreasing degree (stable in the old labels).
    pub fn degree_ordered(&self) -> Self {
        let deg = self.degrees();
        let mut order: Vec<usize> = (0..self.n_vertices).collect();
        order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
        let mut perm = vec![0; self.n_vertices];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        self.relabel(&perm)
    }

    pub fn biadjacency(&self) -> BiadjacencyMatrix {
        let n = self.n_vertices;
        let rows = self
            .edges
            .iter()
            .map(|e| e.iter().fold(0u64, |acc, &v| acc | bit(n, v)))
            .collect();
        BiadjacencyMatrix { n_cols: n, rows }
    }

    /// Adds an edge, keeping the representation sorted.
    pub fn with_edge(&self, e: Edge) -> Result<Self, HypergraphError> {
        let mut edges = self.edges.clone();
        edges.push(e);
        Self::new(self.n_vertices, edges)
    }

    /// Removes vertex `v` and edge index `edge`, shifting later vertex labels down.
    pub fn delete(&self, v: usize, edge: usize) -> Result<Self, HypergraphError> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != edge)
            .map(|(_, e)| e.map(|u| if u > v { u - 1 } else { u }))
            .collect();
        Self::new(self.n_vertices - 1, edges)
    }
}

fn bit(n: usize, col: usize) -> u64 {
    1u64 << (n - 1 - col)
}

/// Rows of the edge/vertex incidence matrix as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiadjacencyMatrix {
    n_cols: usize,
    rows: Vec<u64>,
}

impl BiadjacencyMatrix {
    pub fn new(n_cols: usize, rows: Vec<u64>) -> Self {
        assert!((1..=MAX_VERTICES).contains(&n_cols));
        Self { n_cols, rows }
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row] & bit(self.n_cols, col) != 0
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.n_cols)
            .map(|c| (0..self.rows.len()).filter(|&r| self.get(r, c)).count())
            .collect()
    }

    pub fn to_hypergraph(&self) -> Result<Hypergraph, HypergraphError> {
        let mut edges = Vec::with_capacity(self.rows.len());
        for (r, &row) in self.rows.iter().enumerate() {
            let cols: Vec<usize> = (0..self.n_cols).filter(|&c| self.get(r, c)).collect();
            let edge: Edge = cols.as_slice().try_into().map_err(|_| HypergraphError::Parse {
                line: r + 2,
                message: format!("row has {} ones, expected 4", row.count_ones()),
            })?;
            edges.push(edge);
        }
        Hypergraph::new(self.n_cols, edges)
    }

    /// Text form: a header line of column sums followed by one `0`/`1` row per edge.
    pub fn to_text(&self) -> String {
        let mut out = self.column_sums().iter().join(" ");
        out.push('\n');
        for r in 0..self.rows.len() {
            out.push_str(
                &(0..self.n_cols)
                    .map(|c| if self.get(r, c) { "1" } else { "0" })
                    .join(" "),
            );
            out.push('\n');
        }
        out
    }

    /// Parses the text form; the header must match the actual column sums.
    pub fn parse(text: &str) -> Result<Self, HypergraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(HypergraphError::Parse {
            line: 1,
            message: "empty matrix".into(),
        })?;
        let sums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| HypergraphError::Parse {
                line: hline,
                message: format!("bad column sum: {e}"),
            })?;
        let n = sums.len();
        if n == 0 || n > MAX_VERTICES {
            return Err(HypergraphError::Parse {
                line: hline,
                message: format!("{n} columns outside 1..={MAX_VERTICES}"),
            });
        }
        let mut rows = Vec::new();
        for (lineno, line) in lines {
            let mut row = 0u64;
            let mut cols = 0;
            for tok in line.split_whitespace() {
                let b = match tok {
                    "0" => 0,
                    "1" => 1,
                    other => {
                        return Err(HypergraphError::Parse {
                            line: lineno,
                            message: format!("expected 0 or 1, found {other:?}"),
                        })
                    }
                };
                if cols >= n {
                    return Err(HypergraphError::Parse {
                        line: lineno,
                        message: format!("more than {n} entries"),
                    });
                }
                row |= b << (n - 1 - cols);
                cols += 1;
            }
            if cols != n {
                return Err(HypergraphError::Parse {
                    line: lineno,
                    message: format!("{cols} entries, expected {n}"),
                });
            }
            rows.push(row);
        }
        let m = Self { n_cols: n, rows };
        if m.column_sums() != sums {
            return Err(HypergraphError::Parse {
                line: hline,
                message: format!(
                    "header {} does not match column sums {}",
                    sums.iter().join(" "),
                    m.column_sums().iter().join(" ")
                ),
            });
        }
        Ok(m)
    }

    /// Parses blank-line separated matrices.
    pub fn parse_list(text: &str) -> Result<Vec<Self>, HypergraphError> {
        let mut out = Vec::new();
        let mut block = String::new();
        let mut offset = 0;
        let mut start = 0;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                if !block.is_empty() {
                    out.push(Self::parse(&block).map_err(|e| shift_line(e, start))?);
                    block.clear();
                }
                offset = i + 1;
                continue;
            }
            if block.is_empty() {
                start = offset;
            }
            block.push_str(line);
            block.push('\n');
        }
        if !block.is_empty() {
            out.push(Self::parse(&block).map_err(|e| shift_line(e, start))?);
        }
        Ok(out)
    }
}

fn shift_line(e: HypergraphError, by: usize) -> HypergraphError {
    match e {
        HypergraphError::Parse { line, message } => HypergraphError::Parse {
            line: line + by,
            message,
        },
        other => other,
    }
}

/// Canonical biadjacency matrix of an isomorphism class.
///
/// Ordering is by vertex count, then rows compared lexicographically, which is
/// the row-major bit-string order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    n_vertices: usize,
    rows: Vec<u64>,
}

impl CanonicalKey {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn matrix(&self) -> BiadjacencyMatrix {
        BiadjacencyMatrix::new(self.n_vertices, self.rows.clone())
    }

    /// The canonical representative, vertices labeled by canonical column.
    pub fn to_hypergraph(&self) -> Hypergraph {
        self.matrix()
            .to_hypergraph()
            .expect("canonical keys come from well-formed hypergraphs")
    }
}

impl fmt::Display for CanonicalKey {
    /// `n:` followed by the rows as bit strings joined with `/`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n_vertices)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "/")?;
            }
            write!(f, "{:0width$b}", r, width = self.n_vertices)?;
        }
        Ok(())
    }
}

impl FromStr for CanonicalKey {
    type Err = HypergraphError;

    /// Accepts only strings that are canonical for the hypergraph they describe.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| HypergraphError::Parse { line: 1, message: m };
        let (n, rest) = s.split_once(':').ok_or_else(|| bad(format!("missing ':' in key {s:?}")))?;
        let n: usize = n.parse().map_err(|e| bad(format!("bad vertex count: {e}")))?;
        if n == 0 || n > MAX_VERTICES {
            return Err(bad(format!("vertex count {n} out of range")));
        }
        let rows = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split('/')
                .map(|r| {
                    if r.len() != n || !r.bytes().all(|b| b == b'0' || b == b'1') {
                        return Err(bad(format!("row {r:?} is not {n} bits")));
                    }
                    u64::from_str_radix(r, 2).map_err(|e| bad(e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        let key = CanonicalKey { n_vertices: n, rows };
        let h = key.matrix().to_hypergraph()?;
        if canonical_form(&h) != key {
            return Err(bad(format!("{s} is not a canonical key")));
        }
        Ok(key)
    }
}

/// Vertex degrees sorted nonincreasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColumnSumProfile(pub Vec<usize>);

impl ColumnSumProfile {
    pub fn max(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for ColumnSumProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

impl FromStr for ColumnSumProfile {
    type Err = HypergraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v: Vec<usize> = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| HypergraphError::Parse {
                line: 1,
                message: format!("bad column-sum profile {s:?}: {e}"),
            })?;
        if v.windows(2).any(|w| w[0] < w[1]) {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(Self(v))
    }
}

pub fn column_sums(h: &Hypergraph) -> ColumnSumProfile {
    let mut d = h.degrees();
    d.sort_unstable_by(|a, b| b.cmp(a));
    ColumnSumProfile(d)
}

/// Minimum row-major bit string over all row and column permutations.
///
/// For a fixed row order the best column order is the ascending sort of the
/// columns read top to bottom, and rows `0..=j` of that sorted matrix depend
/// only on the first `j + 1` rows chosen. So the search builds the row order
/// one row at a time and keeps only the partial orders whose newest row is
/// minimal; every survivor yields the same final matrix.
pub fn canonical_form(h: &Hypergraph) -> CanonicalKey {
    let n = h.n_vertices();
    let m = h.n_edges();
    let member: Vec<u64> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u64, |acc, &v| acc | 1 << v))
        .collect();

    // (rows used, column prefix vector of each vertex)
    let mut frontier: Vec<(u64, Vec<u64>)> = vec![(0, vec![0; n])];
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let mut best_row = u64::MAX;
        let mut next = Vec::new();
        for (used, prefix) in &frontier {
            for r in (0..m).filter(|r| used & (1 << r) == 0) {
                let ext: Vec<u64> = (0..n)
                    .map(|v| prefix[v] << 1 | (member[r] >> v & 1))
                    .collect();
                let mut sorted = ext.clone();
                sorted.sort_unstable();
                let row = sorted.iter().fold(0u64, |acc, &c| acc << 1 | (c & 1));
                if row < best_row {
                    best_row = row;
                    next.clear();
                }
                if row == best_row {
                    next.push((used | 1 << r, ext));
                }
            }
        }
        rows.push(best_row);
        frontier = next;
    }
    CanonicalKey { n_vertices: n, rows }
}


pub fn is_isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
    a.n_vertices() == b.n_vertices()
        && a.n_edges() == b.n_edges()
        && canonical_form(a) == canonical_form(b)
}

/// One representative per isomorphism class of 4-uniform hypergraphs with the
/// given sizes and no isolated vertex, sorted by canonical key. Each
/// representative is the hypergraph of its key.
///
/// Classes are grown one edge at a time: every class with `k + 1` edges arises
/// by adding an edge to a representative of some class with `k` edges, so
/// extending all representatives and deduplicating by canonical key at each
/// level is exhaustive.
pub fn enumerate_classes(n_vertices: usize, n_edges: usize) -> Result<Vec<Hypergraph>, HypergraphError> {
    let err = |reason| HypergraphError::Parameters {
        n_vertices,
        n_edges,
        reason,
    };
    if !(4..=MAX_VERTICES).contains(&n_vertices) {
        return Err(err("need between 4 and 64 vertices"));
    }
    if n_edges < 1 {
        return Err(err("need at least one edge"));
    }
    if 4 * n_edges < n_vertices {
        return Err(err("too few edges to cover every vertex"));
    }
    Ok(enumerate_all(n_vertices, n_edges)
        .into_iter()
        .filter(|(_, h)| h.is_valid_for_degree())
        .map(|(_, h)| h)
        .collect())
}

/// All classes with the given sizes, isolated vertices allowed, keyed canonically.
pub fn enumerate_all(n_vertices: usize, n_edges: usize) -> BTreeMap<CanonicalKey, Hypergraph> {
    let all_edges: Vec<Edge> = (0..n_vertices)
        .combinations(4)
        .map(|c| [c[0], c[1], c[2], c[3]])
        .collect();
    let empty = Hypergraph::new(n_vertices, Vec::new()).expect("valid vertex count");
    let mut level: BTreeMap<CanonicalKey, Hypergraph> = BTreeMap::new();
    level.insert(canonical_form(&empty), empty);
    for _ in 0..n_edges {
        let mut next = BTreeMap::new();
        for rep in level.values() {
            for &e in &all_edges {
                if rep.edges().contains(&e) {
                    continue;
                }
                let h = rep.with_edge(e).expect("new edge is distinct");
                let key = canonical_form(&h);
                next.entry(key).or_insert_with_key(|k: &CanonicalKey| k.to_hypergraph());
            }
        }
        level = next;
    }
    level
}
