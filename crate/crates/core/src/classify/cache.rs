//! Append-only record cache, one file per configuration.
//!
//! The file starts with the configuration line; each finished class adds one
//! record line. An interrupted run leaves at most one partial last line,
//! which is dropped on reload.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{ClassRecord, ClassifyError, ReportConfig};

/// Overrides the cache directory chosen by the command-line tool.
pub const CACHE_DIR_ENV: &str = "CRDEG_CACHE_DIR";

const HEADER: &str = "# cross-ratio degree record cache";

/// Records do not depend on the column-sum filter, so it is left out.
fn cache_config(cfg: &ReportConfig) -> ReportConfig {
    ReportConfig {
        filter: None,
        ..cfg.clone()
    }
}

/// File name for a configuration: sizes plus a hash of the config line.
pub fn cache_file(cfg: &ReportConfig) -> String {
    let digest = Sha256::digest(cache_config(cfg).to_line().as_bytes());
    let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    format!("{}_{}_{}.records", cfg.n_vertices, cfg.n_edges, hex)
}

pub struct Cache {
    path: PathBuf,
    records: Vec<ClassRecord>,
    file: File,
}

impl Cache {
    /// Opens the cache for `cfg` in `dir`. With `resume` existing records are
    /// loaded and new ones appended; otherwise the file is started afresh.
    pub fn open(dir: &Path, cfg: &ReportConfig, resume: bool) -> Result<Self, ClassifyError> {
        fs::create_dir_all(dir).map_err(|e| ClassifyError::io(dir, e))?;
        let path = dir.join(cache_file(cfg));
        let cfg = cache_config(cfg);
        let mut records = Vec::new();
        if resume && path.exists() {
            let text = fs::read_to_string(&path).map_err(|e| ClassifyError::io(&path, e))?;
            let (found, recs) = Self::parse(&text)?;
            if found != cfg {
                return Err(ClassifyError::Parse {
                    what: "cache",
                    line: 2,
                    message: format!("{} belongs to a different configuration", path.display()),
                });
            }
            records = recs;
            // rewrite without a partial trailing line so appends start clean
            let mut clean = format!("{HEADER}\n{}\n", cfg.to_line());
            for r in &records {
                clean.push_str(&r.to_line());
                clean.push('\n');
            }
            fs::write(&path, clean).map_err(|e| ClassifyError::io(&path, e))?;
        } else {
            fs::write(&path, format!("{HEADER}\n{}\n", cfg.to_line())).map_err(|e| ClassifyError::io(&path, e))?;
        }
        let file = OpenOptions::new()
            .append(true)
            .open(&path)
            .map_err(|e| ClassifyError::io(&path, e))?;
        Ok(Self { path, records, file })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn records(&self) -> &[ClassRecord] {
        &self.records
    }

    pub fn into_parts(self) -> (Vec<ClassRecord>, CacheWriter) {
        (
            self.records,
            CacheWriter {
                path: self.path,
                file: self.file,
            },
        )
    }

    /// Parses cache text. A final line without a newline is an interrupted
    /// write and is ignored; any other bad line is an error. Later records
    /// for the same key replace earlier ones.
    pub fn parse(text: &str) -> Result<(ReportConfig, Vec<ClassRecord>), ClassifyError> {
        let err = |line: usize, message: String| ClassifyError::Parse {
            what: "cache",
            line,
            message,
        };
        let mut lines: Vec<&str> = text.split('\n').collect();
        // the piece after the last newline is empty or partial
        lines.pop();
        let mut config = None;
        let mut records: Vec<ClassRecord> = Vec::new();
        for (i, line) in lines.iter().enumerate() {
            let n = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if config.is_none() {
                config = Some(ReportConfig::parse_line(line).map_err(|m| err(n, m))?);
                continue;
            }
            let rec = ClassRecord::parse_line(line).map_err(|m| err(n, m))?;
            records.retain(|r| r.key != rec.key);
            records.push(rec);
        }
        let config = config.ok_or_else(|| err(1, "missing config line".into()))?;
        Ok((config, records))
    }
}

pub struct CacheWriter {
    path: PathBuf,
    file: File,
}

impl CacheWriter {
    /// Appends one record line in a single write.
    pub fn append(&mut self, rec: &ClassRecord) -> Result<(), ClassifyError> {
        let mut line = rec.to_line();
        line.push('\n');
        self.file
            .write_all(line.as_bytes())
            .map_err(|e| ClassifyError::io(&self.path, e))
    }
}
