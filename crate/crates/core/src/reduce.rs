//! Structural rules that bound or settle the cross-ratio degree without solving.

use std::fmt;

use thiserror::Error;

use crate::hypergraph::Hypergraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("deletion set must have 3 vertices, got {0}")]
    DeletionSize(usize),
    #[error("deletion set {0:?} repeats a vertex or leaves the range 0..{1}")]
    DeletionVertices(Vec<usize>, usize),
    #[error("{edges} edges cannot be matched to {vertices} remaining vertices")]
    NotSquare { edges: usize, vertices: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutcomeKind {
    ZeroCertificate,
    UpperBound,
    Reduced,
    NoRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionOutcome {
    ZeroCertificate {
        tag: &'static str,
    },
    UpperBound {
        bound: usize,
        tag: String,
    },
    /// `graph` is `h` without `vertex` and its unique edge; the degree is unchanged.
    Reduced {
        graph: Hypergraph,
        vertex: usize,
        edge: usize,
    },
    NoRule {
        note: String,
    },
}

pub const TAG_REPEATED_DEG1: &str = "zero:repeated-deg1";
pub const TAG_NO_MATCHING: &str = "zero:no-matching";
pub const TAG_REDUCED: &str = "reduced:deg1";
pub const TAG_SOLVER: &str = "solver";

impl ReductionOutcome {
    pub fn kind(&self) -> OutcomeKind {
        match self {
            Self::ZeroCertificate { .. } => OutcomeKind::ZeroCertificate,
            Self::UpperBound { .. } => OutcomeKind::UpperBound,
            Self::Reduced { .. } => OutcomeKind::Reduced,
            Self::NoRule { .. } => OutcomeKind::NoRule,
        }
    }

    /// Upper bound implied by this outcome alone (0 for a zero certificate).
    pub fn bound(&self) -> Option<usize> {
        match self {
            Self::ZeroCertificate { .. } => Some(0),
            Self::UpperBound { bound, .. } => Some(*bound),
            _ => None,
        }
    }

    pub fn reduced_graph(&self) -> Option<&Hypergraph> {
        match self {
            Self::Reduced { graph, .. } => Some(graph),
            _ => None,
        }
    }

    /// Provenance tag, or the explanatory note for `NoRule`.
    pub fn note(&self) -> String {
        match self {
            Self::ZeroCertificate { tag } => (*tag).to_string(),
            Self::UpperBound { tag, .. } => tag.clone(),
            Self::Reduced { .. } => TAG_REDUCED.to_string(),
            Self::NoRule { note } => note.clone(),
        }
    }
}

impl fmt::Display for ReductionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroCertificate { tag } => write!(f, "{tag}"),
            Self::UpperBound { bound, tag } => write!(f, "{tag} (d <= {bound})"),
            Self::Reduced { vertex, edge, .. } => {
                write!(f, "{TAG_REDUCED} (vertex {}, edge {})", vertex + 1, edge + 1)
            }
            Self::NoRule { note } => write!(f, "no rule: {note}"),
        }
    }
}

fn no_rule(note: &str) -> ReductionOutcome {
    ReductionOutcome::NoRule { note: note.to_string() }
}

/// Gauging the highest-degree vertex at infinity makes every equation through
/// it linear. A vertex in every edge leaves a linear system (at most one
/// solution); a vertex in all but one edge leaves one quadratic after linear
/// elimination (at most two).
pub fn column_sum_bound(h: &Hypergraph) -> ReductionOutcome {
    let m = h.n_edges();
    let top = h.degrees().into_iter().max().unwrap_or(0);
    let tag = format!("bound:colsum{top}");
    if m >= 1 && top == m {
        ReductionOutcome::UpperBound { bound: 1, tag }
    } else if m >= 2 && top == m - 1 {
        ReductionOutcome::UpperBound { bound: 2, tag }
    } else {
        no_rule("largest column sum too small")
    }
}

/// An edge with two or more degree-1 vertices forces a relation among the
/// targets, so a generic target has no preimage.
pub fn repeated_degree_one_zero(h: &Hypergraph) -> ReductionOutcome {
    let deg = h.degrees();
    let hit = h
        .edges()
        .iter()
        .any(|e| e.iter().filter(|&&v| deg[v] == 1).count() >= 2);
    if hit {
        ReductionOutcome::ZeroCertificate { tag: TAG_REPEATED_DEG1 }
    } else {
        no_rule("no edge with two degree-1 vertices")
    }
}

/// Deletes a degree-1 vertex together with its edge. The deleted vertex is
/// determined uniquely by the remaining points, so the degree is preserved.
/// Picks the highest-labeled qualifying vertex.
pub fn strip_degree_one(h: &Hypergraph) -> ReductionOutcome {
    let deg = h.degrees();
    let mut found_any = false;
    for v in (0..h.n_vertices()).rev().filter(|&v| deg[v] == 1) {
        found_any = true;
        let edge = h
            .edges()
            .iter()
            .position(|e| e.contains(&v))
            .expect("degree-1 vertex lies in an edge");
        let e = h.edges()[edge];
        if e.iter().any(|&u| u != v && deg[u] == 1) {
            continue;
        }
        let graph = h.delete(v, edge).expect("deleting a vertex and its edge stays well-formed");
        if !graph.is_valid_for_degree() || graph.n_vertices() < 4 {
            continue;
        }
        return ReductionOutcome::Reduced { graph, vertex: v, edge };
    }
    if found_any {
        no_rule("every degree-1 vertex shares its edge with another or would isolate a vertex")
    } else {
        no_rule("no degree-1 vertex")
    }
}

/// The three gauge vertices: highest degree first, ties by label.
pub fn gauge_vertices(h: &Hypergraph) -> [usize; 3] {
    let deg = h.degrees();
    let mut order: Vec<usize> = (0..h.n_vertices()).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    [order[0], order[1], order[2]]
}

/// Perfect matchings between the edges and the vertices outside `deleted`,
/// i.e. the permanent of the square biadjacency matrix left after removing
/// the deleted columns.
pub fn matching_count(h: &Hypergraph, deleted: &[usize]) -> Result<u64, ReduceError> {
    let n = h.n_vertices();
    if deleted.len() != 3 {
        return Err(ReduceError::DeletionSize(deleted.len()));
    }
    let mut sorted = deleted.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != 3 || sorted.iter().any(|&v| v >= n) {
        return Err(ReduceError::DeletionVertices(deleted.to_vec(), n));
    }
    let cols: Vec<usize> = (0..n).filter(|v| !sorted.contains(v)).collect();
    if cols.len() != h.n_edges() {
        return Err(ReduceError::NotSquare {
            edges: h.n_edges(),
            vertices: cols.len(),
        });
    }
    let rows: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| {
            cols.iter()
                .enumerate()
                .filter(|(_, c)| e.contains(c))
                .fold(0u32, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    Ok(permanent(&rows, cols.len()))
}

/// Permanent of a square 0/1 matrix with rows as column bitmasks, by dynamic
/// programming over the set of columns already used.
pub fn permanent(rows: &[u32], n: usize) -> u64 {
    assert_eq!(rows.len(), n);
    assert!(n <= 24, "matrix too large for subset dynamic programming");
    let mut ways = vec![0u64; 1 << n];
    ways[0] = 1;
    for mask in 0u32..(1 << n) {
        let w = ways[mask as usize];
        if w == 0 {
            continue;
        }
        let r = mask.count_ones() as usize;
        if r == n {
            continue;
        }
        let mut free = rows[r] & !mask;
        while free != 0 {
            let c = free & free.wrapping_neg();
            ways[(mask | c) as usize] += w;
            free &= free - 1;
        }
    }
    ways[(1usize << n) - 1]
}

/// Every rule applied in the fixed order repeated-deg1, matching, column sum,
/// strip. `matching` is `None` when the graph is not square after removing
/// three vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTrace {
    pub repeated_deg1: ReductionOutcome,
    pub matching: Option<u64>,
    pub colsum: ReductionOutcome,
    pub strip: ReductionOutcome,
}

impl RuleTrace {
    /// Tag of the first zero certificate, if any.
    pub fn zero_certificate(&self) -> Option<&'static str> {
        if self.repeated_deg1.kind() == OutcomeKind::ZeroCertificate {
            Some(TAG_REPEATED_DEG1)
        } else if self.matching == Some(0) {
            Some(TAG_NO_MATCHING)
        } else {
            None
        }
    }

    /// Smallest bound any rule gives on its own.
    pub fn bound(&self) -> Option<usize> {
        if self.zero_certificate().is_some() {
            return Some(0);
        }
        self.colsum.bound()
    }

    /// The rule that decides the provenance tag: first zero certificate, then
    /// the column-sum bound, then the reduction; otherwise the solver alone.
    pub fn provenance(&self) -> String {
        if let Some(tag) = self.zero_certificate() {
            tag.to_string()
        } else if self.colsum.kind() == OutcomeKind::UpperBound {
            self.colsum.note()
        } else if self.strip.kind() == OutcomeKind::Reduced {
            TAG_REDUCED.to_string()
        } else {
            TAG_SOLVER.to_string()
        }
    }
}

pub fn apply_rules(h: &Hypergraph) -> RuleTrace {
    let matching = if h.n_vertices() >= 3 {
        matching_count(h, &gauge_vertices(h)).ok()
    } else {
        None
    };
    RuleTrace {
        repeated_deg1: repeated_degree_one_zero(h),
        matching,
        colsum: column_sum_bound(h),
        strip: strip_degree_one(h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn worked() -> Hypergraph {
        Hypergraph::from_one_based(8, &[[1, 2, 3, 4], [1, 2, 6, 7], [1, 3, 7, 8], [1, 2, 5, 8], [3, 4, 5, 6]])
            .unwrap()
    }

    fn degree_zero() -> Hypergraph {
        Hypergraph::from_one_based(8, &[[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 4, 5], [3, 6, 7, 8], [4, 6, 7, 8]])
            .unwrap()
    }

    #[test]
    fn column_sum_rules() {
        assert_eq!(column_sum_bound(&worked()).bound(), Some(2));
        assert_eq!(column_sum_bound(&worked()).note(), "bound:colsum4");
        let five = Hypergraph::from_one_based(
            8,
            &[[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 3, 6], [1, 2, 3, 7], [1, 2, 3, 8]],
        )
        .unwrap();
        let out = column_sum_bound(&five);
        assert_eq!(out.bound(), Some(1));
        assert_eq!(out.note(), "bound:colsum5");
        assert_eq!(column_sum_bound(&degree_zero()).kind(), OutcomeKind::NoRule);
    }

    #[test]
    fn repeated_degree_one() {
        let h = Hypergraph::from_one_based(
            8,
            &[[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 4, 6], [3, 4, 5, 6], [5, 6, 7, 8]],
        )
        .unwrap();
        assert_eq!(repeated_degree_one_zero(&h).kind(), OutcomeKind::ZeroCertificate);
        assert_eq!(repeated_degree_one_zero(&worked()).kind(), OutcomeKind::NoRule);
        let one_each = Hypergraph::from_one_based(
            8,
            &[[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 4, 6], [3, 4, 5, 7], [5, 6, 7, 8]],
        )
        .unwrap();
        assert_eq!(one_each.degrees()[7], 1);
        assert_eq!(repeated_degree_one_zero(&one_each).kind(), OutcomeKind::NoRule);
    }

    #[test]
    fn strip_matches_block_form() {
        // last row B|1 over a 4x7 block A
        let h = Hypergraph::from_one_based(
            8,
            &[[1, 2, 3, 4], [1, 2, 5, 6], [3, 4, 6, 7], [1, 5, 6, 7], [2, 3, 5, 8]],
        )
        .unwrap();
        let out = strip_degree_one(&h);
        let g = out.reduced_graph().expect("rule applies");
        let a = Hypergraph::from_one_based(7, &[[1, 2, 3, 4], [1, 2, 5, 6], [3, 4, 6, 7], [1, 5, 6, 7]])
            .unwrap();
        assert_eq!(g, &a);
        assert_eq!(strip_degree_one(&worked()).kind(), OutcomeKind::NoRule);
    }

    #[test]
    fn matching_examples() {
        let ident = [1u32, 2, 4, 8, 16];
        assert_eq!(permanent(&ident, 5), 1);
        assert_eq!(permanent(&[31; 5], 5), 120);
        assert_eq!(matching_count(&degree_zero(), &[0, 1, 2]), Ok(0));
        assert!(matching_count(&worked(), &[0, 1]).is_err());
        assert!(matching_count(&worked(), &[0, 1, 1]).is_err());
        assert_eq!(gauge_vertices(&degree_zero()), [0, 1, 2]);
    }

    /// Sum over all assignments of edges to distinct columns.
    fn brute_permanent(rows: &[u32], n: usize) -> u64 {
        (0..n)
            .permutations(n)
            .filter(|p| p.iter().enumerate().all(|(r, &c)| rows[r] >> c & 1 == 1))
            .count() as u64
    }

    #[test]
    fn permanent_agrees_with_brute_force() {
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        for _ in 0..200 {
            let rows: Vec<u32> = (0..5)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state & 31) as u32
                })
                .collect();
            assert_eq!(permanent(&rows, 5), brute_permanent(&rows, 5), "{rows:?}");
        }
    }

    #[test]
    fn trace_for_examples() {
        let t = apply_rules(&degree_zero());
        assert_eq!(t.zero_certificate(), Some(TAG_NO_MATCHING));
        assert_eq!(t.bound(), Some(0));
        let w = apply_rules(&worked());
        assert_eq!(w.provenance(), "bound:colsum4");
        assert!(w.matching.unwrap() > 0);
    }
}
