use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn classify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_classify"))
        .args(args)
        .env_remove("CRDEG_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/golden")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn seven_four_matches_golden() {
    let o = classify(&["--vertices", "7", "--edges", "4", "--golden", &golden("7_4.golden")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("29 classes"));
    assert!(out.contains("max 2"));
    assert!(out.contains("no differences"));
}

#[test]
fn wrong_golden_fails_with_a_diff() {
    let o = classify(&["--vertices", "7", "--edges", "4", "--golden", &golden("8_5.golden")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("sizes: expected 8 vertices"));
}

#[test]
fn filtered_eight_five_matches_golden() {
    let o = classify(&["--filter-colsum", "3,3,3,3,2,2,2,2", "--golden", &golden("8_5.golden")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("38 classes"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(classify(&["--field", "complex"]).status.code(), Some(2));
    assert_eq!(classify(&["--format", "json"]).status.code(), Some(2));
    assert_eq!(classify(&["--vertices", "8", "--edges", "4"]).status.code(), Some(2));
    assert_eq!(classify(&["--trials", "2", "--vertices", "5", "--edges", "2"]).status.code(), Some(2));
}

#[test]
fn csv_output_and_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = classify(&["--vertices", "7", "--edges", "4", "--out", out.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    for f in ["records.csv", "colsum.csv", "degree.csv", "matrices_d3.txt", "matrices_d4.txt"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let cached = fs::read_dir(out.join("cache")).unwrap().count();
    assert_eq!(cached, 1);
    let o = classify(&["--vertices", "7", "--edges", "4", "--out", out.to_str().unwrap(), "--resume"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.join("report.txt").exists());
}

#[test]
fn environment_overrides_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("elsewhere");
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_classify"))
        .args(["--vertices", "6", "--edges", "3", "--out", out.to_str().unwrap()])
        .env("CRDEG_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    assert!(!out.join("cache").exists());
}

#[test]
fn written_golden_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("7_4.golden");
    let base = ["--vertices", "7", "--edges", "4", "--list-degrees", "0,1,2"];
    let o = classify(&[&base[..], &["--write-golden", g.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let o = classify(&[&base[..], &["--seed", "7", "--golden", g.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn chain_dump_is_plain_text() {
    let o = classify(&["--vertices", "6", "--edges", "3", "--dump-chains"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("== 6:"));
    assert!(out.contains("gauge p1 = inf, p2 = 0, p3 = 1"));
    assert!(out.contains("count "));
}
