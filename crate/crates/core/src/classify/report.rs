use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use itertools::Itertools;

use super::{ClassifyError, Format, Problem};
use crate::hypergraph::{CanonicalKey, ColumnSumProfile};
use crate::solver::{Backend, TrialRecord};

/// The settings a report was produced with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportConfig {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub seed: u64,
    pub trials: usize,
    pub backend: Backend,
    pub filter: Option<ColumnSumProfile>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub key: CanonicalKey,
    pub profile: ColumnSumProfile,
    /// Always the solver's answer; rules only cross-check it.
    pub degree: usize,
    pub provenance: String,
    /// Smallest bound from the rules (0 for a zero certificate).
    pub bound: Option<usize>,
    /// Perfect matchings after deleting the three gauge vertices.
    pub matching_count: u64,
    /// Key of the graph left by the degree-1 deletion, when it applies.
    pub reduced: Option<CanonicalKey>,
    pub reduced_degree: Option<usize>,
    pub consensus: bool,
    pub trials: Vec<TrialRecord>,
    pub discarded: Vec<TrialRecord>,
    pub redraws: usize,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn transcript(t: &[TrialRecord]) -> String {
    if t.is_empty() {
        return "-".into();
    }
    t.iter().map(|r| format!("{:016x}:{}", r.seed, r.count)).join(",")
}

fn parse_transcript(s: &str) -> Result<Vec<TrialRecord>, String> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let (seed, count) = t.split_once(':').ok_or_else(|| format!("bad trial {t:?}"))?;
            Ok(TrialRecord {
                seed: u64::from_str_radix(seed, 16).map_err(|e| format!("bad seed {seed:?}: {e}"))?,
                count: count.parse().map_err(|e| format!("bad count {count:?}: {e}"))?,
            })
        })
        .collect()
}

fn parse_opt<T: std::str::FromStr>(s: &str) -> Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    if s == "-" {
        Ok(None)
    } else {
        s.parse().map(Some).map_err(|e| format!("bad value {s:?}: {e}"))
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e| format!("bad value {s:?}: {e}"))
}

/// `name=value` fields after a leading word, all required, in any order.
fn fields<'a>(rest: &'a str, names: &[&str]) -> Result<HashMap<&'a str, &'a str>, String> {
    let mut map = HashMap::new();
    for tok in rest.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| format!("expected name=value, found {tok:?}"))?;
        if !names.contains(&k) {
            return Err(format!("unknown field {k:?}"));
        }
        if map.insert(k, v).is_some() {
            return Err(format!("field {k:?} repeated"));
        }
    }
    if let Some(missing) = names.iter().find(|n| !map.contains_key(*n)) {
        return Err(format!("missing field {missing:?}"));
    }
    Ok(map)
}

const RECORD_FIELDS: [&str; 12] = [
    "key",
    "profile",
    "degree",
    "provenance",
    "bound",
    "matching",
    "reduced",
    "reduced_degree",
    "consensus",
    "trials",
    "discarded",
    "redraws",
];

impl ClassRecord {
    /// One line, starting with `record`.
    pub fn to_line(&self) -> String {
        format!(
            "record key={} profile={} degree={} provenance={} bound={} matching={} reduced={} \
             reduced_degree={} consensus={} trials={} discarded={} redraws={}",
            self.key,
            self.profile,
            self.degree,
            self.provenance,
            opt(&self.bound),
            self.matching_count,
            opt(&self.reduced),
            opt(&self.reduced_degree),
            self.consensus,
            transcript(&self.trials),
            transcript(&self.discarded),
            self.redraws,
        )
    }

    pub fn parse_line(line: &str) -> Result<Self, String> {
        let rest = line
            .strip_prefix("record ")
            .ok_or_else(|| "expected a record line".to_string())?;
        let f = fields(rest, &RECORD_FIELDS)?;
        let key: CanonicalKey = f["key"].parse().map_err(|e| format!("{e}"))?;
        let profile: ColumnSumProfile = f["profile"].parse().map_err(|e| format!("{e}"))?;
        if profile != crate::hypergraph::column_sums(&key.to_hypergraph()) {
            return Err(format!("profile {profile} does not belong to {key}"));
        }
        let consensus = match f["consensus"] {
            "true" => true,
            "false" => false,
            other => return Err(format!("bad consensus {other:?}")),
        };
        let provenance = f["provenance"];
        if provenance.is_empty() {
            return Err("empty provenance".into());
        }
        Ok(Self {
            key,
            profile,
            degree: parse_num(f["degree"])?,
            provenance: provenance.to_string(),
            bound: parse_opt(f["bound"])?,
            matching_count: parse_num(f["matching"])?,
            reduced: parse_opt::<CanonicalKey>(f["reduced"])?,
            reduced_degree: parse_opt(f["reduced_degree"])?,
            consensus,
            trials: parse_transcript(f["trials"])?,
            discarded: parse_transcript(f["discarded"])?,
            redraws: parse_num(f["redraws"])?,
        })
    }
}

impl ReportConfig {
    pub fn to_line(&self) -> String {
        format!(
            "config vertices={} edges={} seed={} trials={} field={} filter={}",
            self.n_vertices,
            self.n_edges,
            self.seed,
            self.trials,
            self.backend,
            opt(&self.filter)
        )
    }

    pub fn parse_line(line: &str) -> Result<Self, String> {
        let rest = line
            .strip_prefix("config ")
            .ok_or_else(|| "expected a config line".to_string())?;
        let f = fields(rest, &["vertices", "edges", "seed", "trials", "field", "filter"])?;
        Ok(Self {
            n_vertices: parse_num(f["vertices"])?,
            n_edges: parse_num(f["edges"])?,
            seed: parse_num(f["seed"])?,
            trials: parse_num(f["trials"])?,
            backend: parse_num(f["field"])?,
            filter: parse_opt(f["filter"])?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub config: ReportConfig,
    /// Sorted by key.
    pub records: Vec<ClassRecord>,
    pub table_colsum: BTreeMap<ColumnSumProfile, usize>,
    pub table_degree: BTreeMap<usize, usize>,
    pub max_degree: usize,
}

const REPORT_HEADER: &str = "# cross-ratio degree report";

impl Report {
    pub fn new(config: ReportConfig, mut records: Vec<ClassRecord>) -> Self {
        records.sort_by(|a, b| a.key.cmp(&b.key));
        let mut table_colsum = BTreeMap::new();
        let mut table_degree = BTreeMap::new();
        for r in &records {
            *table_colsum.entry(r.profile.clone()).or_insert(0) += 1;
            *table_degree.entry(r.degree).or_insert(0) += 1;
        }
        let max_degree = records.iter().map(|r| r.degree).max().unwrap_or(0);
        Self {
            config,
            records,
            table_colsum,
            table_degree,
            max_degree,
        }
    }

    pub fn record(&self, key: &CanonicalKey) -> Option<&ClassRecord> {
        self.records
            .binary_search_by(|r| r.key.cmp(key))
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn with_degree(&self, d: usize) -> impl Iterator<Item = &ClassRecord> {
        self.records.iter().filter(move |r| r.degree == d)
    }

    pub fn consensus(&self) -> bool {
        self.records.iter().all(|r| r.consensus)
    }

    pub fn problems(&self) -> Vec<Problem> {
        let mut out = Vec::new();
        for r in &self.records {
            if !r.consensus {
                out.push(Problem::NoConsensus { key: r.key.clone() });
            }
            if let Some(b) = r.bound {
                if r.degree > b {
                    out.push(Problem::BoundViolated {
                        key: r.key.clone(),
                        degree: r.degree,
                        bound: b,
                        provenance: r.provenance.clone(),
                    });
                }
            }
            if let Some(rd) = r.reduced_degree {
                if rd != r.degree {
                    out.push(Problem::ReductionMismatch {
                        key: r.key.clone(),
                        degree: r.degree,
                        reduced_degree: rd,
                    });
                }
            }
        }
        out
    }

    /// Column-sum rows by decreasing count, ties by profile.
    pub fn colsum_rows(&self) -> Vec<(&ColumnSumProfile, usize)> {
        self.table_colsum
            .iter()
            .map(|(p, &c)| (p, c))
            .sorted_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(REPORT_HEADER);
        out.push('\n');
        out.push_str(&self.config.to_line());
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        for (p, c) in self.colsum_rows() {
            out.push_str(&format!("colsum {p} {c}\n"));
        }
        for (d, c) in &self.table_degree {
            out.push_str(&format!("degree {d} {c}\n"));
        }
        out.push_str(&format!("max_degree {}\nend\n", self.max_degree));
        out
    }

    /// Parses [`Report::to_text`] output. The tables must agree with the records.
    pub fn parse(text: &str) -> Result<Self, ClassifyError> {
        let err = |line: usize, message: String| ClassifyError::Parse {
            what: "report",
            line,
            message,
        };
        let mut config = None;
        let mut records = Vec::new();
        let mut colsum = BTreeMap::new();
        let mut degree = BTreeMap::new();
        let mut max_degree = None;
        let mut ended = false;
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if ended {
                return Err(err(n, "content after end".into()));
            }
            let (word, rest) = line.split_once(' ').unwrap_or((line, ""));
            match word {
                "config" => {
                    if config.is_some() {
                        return Err(err(n, "second config line".into()));
                    }
                    config = Some(ReportConfig::parse_line(line).map_err(|m| err(n, m))?);
                }
                "record" => records.push(ClassRecord::parse_line(line).map_err(|m| err(n, m))?),
                "colsum" => {
                    let (p, c) = rest.split_once(' ').ok_or_else(|| err(n, "expected profile and count".into()))?;
                    let p: ColumnSumProfile = p.parse().map_err(|e| err(n, format!("{e}")))?;
                    let c: usize = parse_num(c).map_err(|m| err(n, m))?;
                    if colsum.insert(p, c).is_some() {
                        return Err(err(n, "repeated profile".into()));
                    }
                }
                "degree" => {
                    let (d, c) = rest.split_once(' ').ok_or_else(|| err(n, "expected degree and count".into()))?;
                    let d: usize = parse_num(d).map_err(|m| err(n, m))?;
                    let c: usize = parse_num(c).map_err(|m| err(n, m))?;
                    if degree.insert(d, c).is_some() {
                        return Err(err(n, "repeated degree".into()));
                    }
                }
                "max_degree" => max_degree = Some(parse_num::<usize>(rest).map_err(|m| err(n, m))?),
                "end" => ended = true,
                other => return Err(err(n, format!("unknown line kind {other:?}"))),
            }
        }
        let last = text.lines().count();
        if !ended {
            return Err(err(last, "missing end line (truncated report?)".into()));
        }
        let config = config.ok_or_else(|| err(last, "missing config line".into()))?;
        if records.windows(2).any(|w| w[0].key >= w[1].key) {
            return Err(err(last, "records not sorted by key or repeated".into()));
        }
        let report = Report::new(config, records);
        if report.table_colsum != colsum || report.table_degree != degree {
            return Err(err(last, "tables do not match the records".into()));
        }
        if max_degree != Some(report.max_degree) {
            return Err(err(last, "max_degree does not match the records".into()));
        }
        Ok(report)
    }

    pub fn colsum_table_text(&self) -> String {
        let mut out = String::new();
        for (p, c) in self.colsum_rows() {
            out.push_str(&format!("({p}) {c}\n"));
        }
        out.push_str(&format!("total {}\n", self.records.len()));
        out
    }

    pub fn degree_table_text(&self) -> String {
        let mut out = String::new();
        for (d, c) in &self.table_degree {
            out.push_str(&format!("{d} {c}\n"));
        }
        out.push_str(&format!("total {}\nmax {}\n", self.records.len(), self.max_degree));
        out
    }

    /// Blank-line separated matrices of every class of degree `d`, columns
    /// ordered by nonincreasing degree under the matrix's column-sum header.
    pub fn matrix_listing(&self, d: usize) -> String {
        self.with_degree(d)
            .map(|r| r.key.to_hypergraph().degree_ordered().biadjacency().to_text())
            .join("\n")
    }
}

fn write(dir: &Path, name: &str, contents: &[u8], written: &mut Vec<PathBuf>) -> Result<(), ClassifyError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| ClassifyError::io(&path, e))?;
    written.push(path);
    Ok(())
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

/// Writes the report, the two tables and a matrix listing per requested
/// degree into `dir`. Returns the paths written.
pub fn emit_tables(
    rep: &Report,
    format: Format,
    dir: &Path,
    listing_degrees: &[usize],
) -> Result<Vec<PathBuf>, ClassifyError> {
    fs::create_dir_all(dir).map_err(|e| ClassifyError::io(dir, e))?;
    let mut written = Vec::new();
    match format {
        Format::Text => {
            write(dir, "report.txt", rep.to_text().as_bytes(), &mut written)?;
            write(dir, "colsum.txt", rep.colsum_table_text().as_bytes(), &mut written)?;
            write(dir, "degree.txt", rep.degree_table_text().as_bytes(), &mut written)?;
        }
        Format::Csv => {
            let to_io = |path: &str| {
                let p = dir.join(path);
                move |e: csv::Error| ClassifyError::io(p, e.into())
            };
            let records = rep
                .records
                .iter()
                .map(|r| {
                    vec![
                        r.key.to_string(),
                        r.profile.to_string(),
                        r.degree.to_string(),
                        r.provenance.clone(),
                        opt(&r.bound),
                        r.matching_count.to_string(),
                        opt(&r.reduced),
                        opt(&r.reduced_degree),
                        r.consensus.to_string(),
                        transcript(&r.trials),
                    ]
                })
                .collect();
            let header = [
                "key",
                "profile",
                "degree",
                "provenance",
                "bound",
                "matching",
                "reduced",
                "reduced_degree",
                "consensus",
                "trials",
            ];
            let bytes = csv_bytes(&header, records).map_err(to_io("records.csv"))?;
            write(dir, "records.csv", &bytes, &mut written)?;
            let rows = rep
                .colsum_rows()
                .into_iter()
                .map(|(p, c)| vec![p.to_string(), c.to_string()])
                .collect();
            let bytes = csv_bytes(&["profile", "count"], rows).map_err(to_io("colsum.csv"))?;
            write(dir, "colsum.csv", &bytes, &mut written)?;
            let rows = rep
                .table_degree
                .iter()
                .map(|(d, c)| vec![d.to_string(), c.to_string()])
                .collect();
            let bytes = csv_bytes(&["degree", "count"], rows).map_err(to_io("degree.csv"))?;
            write(dir, "degree.csv", &bytes, &mut written)?;
        }
    }
    for &d in listing_degrees {
        write(dir, &format!("matrices_d{d}.txt"), rep.matrix_listing(d).as_bytes(), &mut written)?;
    }
    Ok(written)
}
