//! Whole-run orchestration: enumerate, apply the structural rules, solve every
//! class, and collect the results into a [`Report`].

mod cache;
mod golden;
mod report;

use std::collections::BTreeSet;
use std::fmt;
use std::io;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Mutex;

use rayon::prelude::*;
use thiserror::Error;

use crate::hypergraph::{
    canonical_form, column_sums, enumerate_classes, CanonicalKey, ColumnSumProfile, Hypergraph, HypergraphError,
};
use crate::reduce::{apply_rules, ReductionOutcome};
use crate::solver::{cross_ratio_degree, mix64, Backend, SolverError, DEFAULT_TRIALS};

pub use cache::{cache_file, Cache, CacheWriter, CACHE_DIR_ENV};
pub use golden::{compare_golden, verify_against_golden, DiffEntry, Golden, GoldenDiff};
pub use report::{emit_tables, ClassRecord, Report, ReportConfig};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Csv => "csv",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected text or csv)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub seed: u64,
    pub trials: usize,
    pub backend: Backend,
    pub format: Format,
    /// Directory for the per-configuration record cache; `None` disables it.
    pub cache_dir: Option<PathBuf>,
    /// Reuse records already in the cache instead of starting over.
    pub resume: bool,
    pub filter_colsum: Option<ColumnSumProfile>,
    /// Also solve the graph left by a degree-1 deletion and compare.
    pub check_reductions: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_vertices: 8,
            n_edges: 5,
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            backend: Backend::Prime,
            format: Format::Text,
            cache_dir: None,
            resume: false,
            filter_colsum: None,
            check_reductions: true,
        }
    }
}

impl RunConfig {
    pub fn new(n_vertices: usize, n_edges: usize) -> Self {
        Self {
            n_vertices,
            n_edges,
            ..Self::default()
        }
    }

    pub fn report_config(&self) -> ReportConfig {
        ReportConfig {
            n_vertices: self.n_vertices,
            n_edges: self.n_edges,
            seed: self.seed,
            trials: self.trials,
            backend: self.backend,
            filter: self.filter_colsum.clone(),
        }
    }
}

/// Something wrong with a finished run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    NoConsensus { key: CanonicalKey },
    BoundViolated { key: CanonicalKey, degree: usize, bound: usize, provenance: String },
    ReductionMismatch { key: CanonicalKey, degree: usize, reduced_degree: usize },
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::NoConsensus { key } => write!(f, "{key}: trials disagree"),
            Problem::BoundViolated {
                key,
                degree,
                bound,
                provenance,
            } => write!(f, "{key}: degree {degree} exceeds {provenance} bound {bound}"),
            Problem::ReductionMismatch {
                key,
                degree,
                reduced_degree,
            } => write!(f, "{key}: degree {degree} but the reduced graph has degree {reduced_degree}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("{0} vertices need {} edges for a cross-ratio degree, got {1}", .0.saturating_sub(3))]
    NotSquare(usize, usize),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("class {key}: {source}")]
    Solver { key: CanonicalKey, source: SolverError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{what} line {line}: {message}")]
    Parse { what: &'static str, line: usize, message: String },
    #[error("run failed for {} classes:\n{}", .problems.len(), problems.iter().map(|p| format!("  {p}")).collect::<Vec<_>>().join("\n"))]
    RunFailed { problems: Vec<Problem>, report: Box<Report> },
    #[error("refusing to write a golden file from a run without consensus")]
    GoldenFromBadRun,
}

impl ClassifyError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

fn key_seed(seed: u64, key: &CanonicalKey) -> u64 {
    let h = key
        .rows()
        .iter()
        .fold(mix64(key.n_vertices() as u64), |h, &r| mix64(h ^ r));
    mix64(seed ^ h)
}

/// Rules plus solver for one class.
pub fn classify_one(h: &Hypergraph, cfg: &RunConfig) -> Result<ClassRecord, ClassifyError> {
    let key = canonical_form(h);
    let solve = |g: &Hypergraph, k: &CanonicalKey| {
        cross_ratio_degree(g, cfg.trials, key_seed(cfg.seed, k), cfg.backend).map_err(|source| {
            ClassifyError::Solver {
                key: k.clone(),
                source,
            }
        })
    };
    let result = solve(h, &key)?;
    let trace = apply_rules(h);
    let (reduced, reduced_degree) = match &trace.strip {
        ReductionOutcome::Reduced { graph, .. } => {
            let rk = canonical_form(graph);
            let rd = if cfg.check_reductions {
                Some(solve(graph, &rk)?.degree)
            } else {
                None
            };
            (Some(rk), rd)
        }
        _ => (None, None),
    };
    Ok(ClassRecord {
        profile: column_sums(h),
        key,
        degree: result.degree,
        provenance: trace.provenance(),
        bound: trace.bound(),
        matching_count: trace.matching.unwrap_or(0),
        reduced,
        reduced_degree,
        consensus: result.consensus,
        trials: result.trials,
        discarded: result.discarded,
        redraws: result.redraws,
    })
}

/// Classifies every class (or those with the filtered profile). Records are
/// cached as they finish when a cache directory is set, and with `resume`
/// cached records are reused. Fails if any class lacks consensus, breaks a
/// rule bound, or disagrees with its reduction; the report is attached.
pub fn run_classification(cfg: &RunConfig) -> Result<Report, ClassifyError> {
    if cfg.n_edges + 3 != cfg.n_vertices {
        return Err(ClassifyError::NotSquare(cfg.n_vertices, cfg.n_edges));
    }
    let mut classes = enumerate_classes(cfg.n_vertices, cfg.n_edges)?;
    if let Some(p) = &cfg.filter_colsum {
        classes.retain(|h| &column_sums(h) == p);
    }
    let cache = match &cfg.cache_dir {
        Some(dir) => Some(Cache::open(dir, &cfg.report_config(), cfg.resume)?),
        None => None,
    };
    let (cached, writer) = match cache {
        Some(c) => {
            let (records, writer) = c.into_parts();
            (records, Some(Mutex::new(writer)))
        }
        None => (Vec::new(), None),
    };
    let wanted: BTreeSet<CanonicalKey> = classes.iter().map(canonical_form).collect();
    let mut records: Vec<ClassRecord> = cached.into_iter().filter(|r| wanted.contains(&r.key)).collect();
    let done: BTreeSet<CanonicalKey> = records.iter().map(|r| r.key.clone()).collect();
    let todo: Vec<&Hypergraph> = classes.iter().filter(|h| !done.contains(&canonical_form(h))).collect();
    let fresh: Vec<ClassRecord> = todo
        .par_iter()
        .map(|h| {
            let rec = classify_one(h, cfg)?;
            if let Some(w) = &writer {
                w.lock().expect("cache writer poisoned").append(&rec)?;
            }
            Ok(rec)
        })
        .collect::<Result<_, ClassifyError>>()?;
    records.extend(fresh);
    let report = Report::new(cfg.report_config(), records);
    let problems = report.problems();
    if problems.is_empty() {
        Ok(report)
    } else {
        Err(ClassifyError::RunFailed {
            problems,
            report: Box::new(report),
        })
    }
}
