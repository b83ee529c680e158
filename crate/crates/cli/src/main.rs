use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use crossratio::classify::{
    emit_tables, run_classification, verify_against_golden, ClassifyError, Format, Golden, Report, RunConfig,
    CACHE_DIR_ENV, DEFAULT_SEED,
};
use crossratio::hypergraph::ColumnSumProfile;
use crossratio::solver::{dump_chain, Backend, DEFAULT_TRIALS};

/// Classify 4-uniform hypergraphs by cross-ratio degree.
#[derive(Parser, Debug)]
#[command(name = "classify", version)]
struct Args {
    #[arg(long, default_value_t = 8)]
    vertices: usize,
    #[arg(long, default_value_t = 5)]
    edges: usize,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Coefficient field: prime or rational.
    #[arg(long, default_value_t = Backend::Prime)]
    field: Backend,
    /// Only classes with this column-sum profile, e.g. "3,3,3,3,2,2,2,2".
    #[arg(long)]
    filter_colsum: Option<ColumnSumProfile>,
    /// Directory for the report, tables and matrix listings. Records are
    /// cached under DIR/cache unless CRDEG_CACHE_DIR is set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// text or csv.
    #[arg(long, default_value_t = Format::Text)]
    format: Format,
    /// Compare against a golden file; any difference fails the run.
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Reuse cached records from an earlier, possibly interrupted run.
    #[arg(long)]
    resume: bool,
    /// Degrees whose matrices are listed in the output directory.
    #[arg(long, value_delimiter = ',', default_value = "3,4")]
    list_degrees: Vec<usize>,
    /// Write a golden file from this run (refused without consensus).
    #[arg(long)]
    write_golden: Option<PathBuf>,
    /// Dump each class's system and elimination tree to DIR/chains.txt
    /// (stdout without --out).
    #[arg(long)]
    dump_chains: bool,
}

fn cache_dir(args: &Args) -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .or_else(|| args.out.as_ref().map(|o| o.join("cache")))
}

fn summary(rep: &Report) -> String {
    format!(
        "{} classes on {} vertices with {} edges\n\ncolumn sums:\n{}\ndegrees:\n{}",
        rep.records.len(),
        rep.config.n_vertices,
        rep.config.n_edges,
        rep.colsum_table_text(),
        rep.degree_table_text()
    )
}

fn run(args: &Args) -> Result<bool> {
    let cfg = RunConfig {
        n_vertices: args.vertices,
        n_edges: args.edges,
        seed: args.seed,
        trials: args.trials,
        backend: args.field,
        format: args.format,
        cache_dir: cache_dir(args),
        resume: args.resume,
        filter_colsum: args.filter_colsum.clone(),
        check_reductions: true,
    };
    let (rep, mut ok) = match run_classification(&cfg) {
        Ok(rep) => (rep, true),
        Err(ClassifyError::RunFailed { problems, report }) => {
            eprintln!("run failed for {} classes:", problems.len());
            for p in &problems {
                eprintln!("  {p}");
            }
            (*report, false)
        }
        Err(e) => return Err(e.into()),
    };
    print!("{}", summary(&rep));
    if let Some(out) = &args.out {
        let written = emit_tables(&rep, cfg.format, out, &args.list_degrees)?;
        for p in written {
            eprintln!("wrote {}", p.display());
        }
    }
    if args.dump_chains {
        let mut text = String::new();
        for r in &rep.records {
            text.push_str(&format!("== {}\n", r.key));
            match dump_chain(&r.key.to_hypergraph(), args.seed, args.field) {
                Ok(s) => text.push_str(&s),
                Err(e) => text.push_str(&format!("error: {e}\n")),
            }
        }
        match &args.out {
            Some(out) => {
                let path = out.join("chains.txt");
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            None => print!("{text}"),
        }
    }
    if let Some(g) = &args.golden {
        let diff = verify_against_golden(&rep, g)?;
        if diff.is_empty() {
            println!("golden {}: no differences", g.display());
        } else {
            println!("golden {}: {} differences", g.display(), diff.entries.len());
            print!("{diff}");
            ok = false;
        }
    }
    if let Some(path) = &args.write_golden {
        let g = Golden::from_report(&rep, &args.list_degrees)?;
        fs::write(path, g.to_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
