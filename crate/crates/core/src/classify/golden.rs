//! Reference data for a run and the structural diff against it.
//!
//! ```text
//! vertices 8
//! edges 5
//! classes 484
//! colsum 4,3,3,3,2,2,2,1 86      (optional; if present, complete)
//! degree 0 79                    (optional; if present, complete)
//! max_degree 4                   (optional)
//! matrix 4                       (every class of that degree, one block each)
//! 3 3 3 3 2 2 2 2
//! 1 1 1 1 0 0 0 0
//! ...
//! end
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use itertools::Itertools;

use super::{ClassifyError, Report};
use crate::hypergraph::{canonical_form, column_sums, BiadjacencyMatrix, CanonicalKey, ColumnSumProfile};

/// Counts come straight from the file, so sums must not overflow.
fn checked_total<'a>(it: impl IntoIterator<Item = &'a usize>) -> Option<usize> {
    it.into_iter().try_fold(0usize, |acc, &x| acc.checked_add(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Golden {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub classes: usize,
    pub colsum: BTreeMap<ColumnSumProfile, usize>,
    pub degree: BTreeMap<usize, usize>,
    pub max_degree: Option<usize>,
    /// Complete class lists for some degrees.
    pub matrices: BTreeMap<usize, Vec<BiadjacencyMatrix>>,
}

impl Golden {
    /// Canonical keys of the listed classes of degree `d`.
    pub fn keys(&self, d: usize) -> BTreeSet<CanonicalKey> {
        self.matrices
            .get(&d)
            .into_iter()
            .flatten()
            .map(|m| canonical_form(&m.to_hypergraph().expect("validated when parsed")))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self, ClassifyError> {
        let err = |line: usize, message: String| ClassifyError::Parse {
            what: "golden",
            line,
            message,
        };
        let mut n_vertices = None;
        let mut n_edges = None;
        let mut classes = None;
        let mut colsum = BTreeMap::new();
        let mut degree = BTreeMap::new();
        let mut max_degree = None;
        let mut matrices: BTreeMap<usize, Vec<BiadjacencyMatrix>> = BTreeMap::new();
        let mut ended = false;
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let num = |n: usize, s: &str| s.parse::<usize>().map_err(|e| err(n, format!("bad number {s:?}: {e}")));
        while let Some((n, line)) = lines.next() {
            if ended {
                return Err(err(n, "content after end".into()));
            }
            let (word, rest) = line.split_once(' ').unwrap_or((line, ""));
            let rest = rest.trim();
            let set_once = |slot: &mut Option<usize>, v: usize| {
                if slot.replace(v).is_some() {
                    Err(err(n, format!("{word} given twice")))
                } else {
                    Ok(())
                }
            };
            match word {
                "vertices" => set_once(&mut n_vertices, num(n, rest)?)?,
                "edges" => set_once(&mut n_edges, num(n, rest)?)?,
                "classes" => set_once(&mut classes, num(n, rest)?)?,
                "max_degree" => set_once(&mut max_degree, num(n, rest)?)?,
                "colsum" => {
                    let (p, c) = rest.split_once(' ').ok_or_else(|| err(n, "expected profile and count".into()))?;
                    let p: ColumnSumProfile = p.parse().map_err(|e| err(n, format!("{e}")))?;
                    if colsum.insert(p, num(n, c.trim())?).is_some() {
                        return Err(err(n, "repeated profile".into()));
                    }
                }
                "degree" => {
                    let (d, c) = rest.split_once(' ').ok_or_else(|| err(n, "expected degree and count".into()))?;
                    if degree.insert(num(n, d)?, num(n, c.trim())?).is_some() {
                        return Err(err(n, "repeated degree".into()));
                    }
                }
                "matrix" => {
                    let d = num(n, rest)?;
                    let (Some(nv), Some(ne)) = (n_vertices, n_edges) else {
                        return Err(err(n, "matrix before vertices and edges".into()));
                    };
                    let mut block = String::new();
                    for _ in 0..=ne {
                        let (_, l) = lines.next().ok_or_else(|| err(n, "matrix block cut short".into()))?;
                        block.push_str(l);
                        block.push('\n');
                    }
                    let m = BiadjacencyMatrix::parse(&block).map_err(|e| err(n, format!("matrix: {e}")))?;
                    if m.n_cols() != nv {
                        return Err(err(n, format!("matrix has {} columns, expected {nv}", m.n_cols())));
                    }
                    let h = m.to_hypergraph().map_err(|e| err(n, format!("matrix: {e}")))?;
                    if !h.is_valid_for_degree() {
                        return Err(err(n, "matrix has an empty column".into()));
                    }
                    matrices.entry(d).or_default().push(m);
                }
                "end" => ended = true,
                other => return Err(err(n, format!("unknown line kind {other:?}"))),
            }
        }
        let last = text.lines().count().max(1);
        if !ended {
            return Err(err(last, "missing end line".into()));
        }
        let missing = |what: &str| err(last, format!("missing {what} line"));
        let g = Golden {
            n_vertices: n_vertices.ok_or_else(|| missing("vertices"))?,
            n_edges: n_edges.ok_or_else(|| missing("edges"))?,
            classes: classes.ok_or_else(|| missing("classes"))?,
            colsum,
            degree,
            max_degree,
            matrices,
        };
        g.check().map_err(|m| err(last, m))?;
        Ok(g)
    }

    fn check(&self) -> Result<(), String> {
        if !self.colsum.is_empty() && checked_total(self.colsum.values()) != Some(self.classes) {
            return Err("column-sum counts do not add up to the class count".into());
        }
        for p in self.colsum.keys() {
            if p.0.len() != self.n_vertices || checked_total(&p.0) != self.n_edges.checked_mul(4) {
                return Err(format!("profile {p} does not fit the sizes"));
            }
        }
        if !self.degree.is_empty() {
            if checked_total(self.degree.values()) != Some(self.classes) {
                return Err("degree counts do not add up to the class count".into());
            }
            if let Some(m) = self.max_degree {
                if self.degree.keys().copied().filter(|&d| self.degree[&d] > 0).max() != Some(m) {
                    return Err("max_degree disagrees with the degree table".into());
                }
            }
        }
        for (&d, ms) in &self.matrices {
            if ms.iter().any(|m| m.rows().len() != self.n_edges) {
                return Err(format!("a degree-{d} matrix has the wrong number of rows"));
            }
            if self.keys(d).len() != ms.len() {
                return Err(format!("degree-{d} matrices repeat a class"));
            }
            if let Some(&c) = self.degree.get(&d) {
                if c != ms.len() {
                    return Err(format!("{} degree-{d} matrices listed, table says {c}", ms.len()));
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "vertices {}\nedges {}\nclasses {}\n",
            self.n_vertices, self.n_edges, self.classes
        );
        for (p, c) in self.colsum.iter().sorted_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0))) {
            out.push_str(&format!("colsum {p} {c}\n"));
        }
        for (d, c) in &self.degree {
            out.push_str(&format!("degree {d} {c}\n"));
        }
        if let Some(m) = self.max_degree {
            out.push_str(&format!("max_degree {m}\n"));
        }
        for (d, ms) in self.matrices.iter().rev() {
            for m in ms {
                out.push_str(&format!("matrix {d}\n{}", m.to_text()));
            }
        }
        out.push_str("end\n");
        out
    }

    /// Golden data from a finished run with full tables and the classes of
    /// the given degrees. Refuses runs with any disagreement.
    pub fn from_report(rep: &Report, listed: &[usize]) -> Result<Self, ClassifyError> {
        if !rep.problems().is_empty() || rep.config.filter.is_some() {
            return Err(ClassifyError::GoldenFromBadRun);
        }
        let matrices = listed
            .iter()
            .map(|&d| {
                let ms = rep
                    .with_degree(d)
                    .map(|r| r.key.to_hypergraph().degree_ordered().biadjacency())
                    .collect();
                (d, ms)
            })
            .collect();
        Ok(Self {
            n_vertices: rep.config.n_vertices,
            n_edges: rep.config.n_edges,
            classes: rep.records.len(),
            colsum: rep.table_colsum.clone(),
            degree: rep.table_degree.clone(),
            max_degree: Some(rep.max_degree),
            matrices,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffEntry {
    Sizes { expected: (usize, usize), actual: (usize, usize) },
    Classes { expected: usize, actual: usize },
    Colsum { profile: ColumnSumProfile, expected: usize, actual: usize },
    Degree { degree: usize, expected: usize, actual: usize },
    MaxDegree { expected: usize, actual: usize },
    /// A listed class the report does not have at that degree.
    Missing { degree: usize, key: CanonicalKey, actual: Option<usize> },
    /// A class the report has at a listed degree that is not listed.
    Unexpected { degree: usize, key: CanonicalKey },
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffEntry::Sizes { expected, actual } => write!(
                f,
                "sizes: expected {} vertices / {} edges, got {} / {}",
                expected.0, expected.1, actual.0, actual.1
            ),
            DiffEntry::Classes { expected, actual } => write!(f, "classes: expected {expected}, got {actual}"),
            DiffEntry::Colsum {
                profile,
                expected,
                actual,
            } => write!(f, "colsum ({profile}): expected {expected}, got {actual}"),
            DiffEntry::Degree {
                degree,
                expected,
                actual,
            } => write!(f, "degree {degree}: expected {expected}, got {actual}"),
            DiffEntry::MaxDegree { expected, actual } => write!(f, "max_degree: expected {expected}, got {actual}"),
            DiffEntry::Missing { degree, key, actual } => match actual {
                Some(a) => write!(f, "degree {degree}: class {key} has degree {a} in the report"),
                None => write!(f, "degree {degree}: class {key} is missing from the report"),
            },
            DiffEntry::Unexpected { degree, key } => write!(f, "degree {degree}: class {key} is not in the golden list"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoldenDiff {
    pub entries: Vec<DiffEntry>,
}

impl GoldenDiff {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for GoldenDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return writeln!(f, "no differences");
        }
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Tables and listed class sets of `rep` against `golden`. A report
/// restricted to one column-sum profile is compared only on that profile.
pub fn compare_golden(rep: &Report, golden: &Golden) -> GoldenDiff {
    let mut entries = Vec::new();
    let actual_sizes = (rep.config.n_vertices, rep.config.n_edges);
    if actual_sizes != (golden.n_vertices, golden.n_edges) {
        entries.push(DiffEntry::Sizes {
            expected: (golden.n_vertices, golden.n_edges),
            actual: actual_sizes,
        });
        return GoldenDiff { entries };
    }
    let filter = rep.config.filter.as_ref();
    let expected_classes = match filter {
        None => Some(golden.classes),
        Some(p) if !golden.colsum.is_empty() => Some(golden.colsum.get(p).copied().unwrap_or(0)),
        Some(_) => None,
    };
    if let Some(e) = expected_classes {
        if e != rep.records.len() {
            entries.push(DiffEntry::Classes {
                expected: e,
                actual: rep.records.len(),
            });
        }
    }
    if filter.is_none() {
        let profiles: BTreeSet<&ColumnSumProfile> = golden.colsum.keys().chain(rep.table_colsum.keys()).collect();
        if !golden.colsum.is_empty() {
            for p in profiles {
                let e = golden.colsum.get(p).copied().unwrap_or(0);
                let a = rep.table_colsum.get(p).copied().unwrap_or(0);
                if e != a {
                    entries.push(DiffEntry::Colsum {
                        profile: p.clone(),
                        expected: e,
                        actual: a,
                    });
                }
            }
        }
        if !golden.degree.is_empty() {
            let degrees: BTreeSet<usize> = golden.degree.keys().chain(rep.table_degree.keys()).copied().collect();
            for d in degrees {
                let e = golden.degree.get(&d).copied().unwrap_or(0);
                let a = rep.table_degree.get(&d).copied().unwrap_or(0);
                if e != a {
                    entries.push(DiffEntry::Degree {
                        degree: d,
                        expected: e,
                        actual: a,
                    });
                }
            }
        }
        if let Some(m) = golden.max_degree {
            if m != rep.max_degree {
                entries.push(DiffEntry::MaxDegree {
                    expected: m,
                    actual: rep.max_degree,
                });
            }
        }
    }
    let in_scope = |k: &CanonicalKey| filter.is_none_or(|p| &column_sums(&k.to_hypergraph()) == p);
    for &d in golden.matrices.keys() {
        let expected: BTreeSet<CanonicalKey> = golden.keys(d).into_iter().filter(|k| in_scope(k)).collect();
        let actual: BTreeSet<CanonicalKey> = rep.with_degree(d).map(|r| r.key.clone()).collect();
        for k in expected.difference(&actual) {
            entries.push(DiffEntry::Missing {
                degree: d,
                key: k.clone(),
                actual: rep.record(k).map(|r| r.degree),
            });
        }
        for k in actual.difference(&expected) {
            entries.push(DiffEntry::Unexpected {
                degree: d,
                key: k.clone(),
            });
        }
    }
    GoldenDiff { entries }
}

pub fn verify_against_golden(rep: &Report, path: &Path) -> Result<GoldenDiff, ClassifyError> {
    let text = fs::read_to_string(path).map_err(|e| ClassifyError::io(path, e))?;
    let golden = Golden::parse(&text)?;
    Ok(compare_golden(rep, &golden))
}
