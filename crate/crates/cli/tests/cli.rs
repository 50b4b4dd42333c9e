use std::path::PathBuf;
use std::process::{Command, Output};

fn nichols(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nichols")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

/// Data rows of a markdown table.
fn md_rows(text: &str) -> usize {
    text.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| class |") && !l.starts_with("| row |")).count()
}

#[test]
fn classes_json_for_sz8() {
    let o = nichols(&["classes", "--group", &data("sz8.gens"), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 11);
    assert_eq!(v["order"], 29120);
    assert_eq!(v["seed"], 1);
}

#[test]
fn verify_paper_table_4_passes() {
    let o = nichols(&["verify-paper", "--paper-table", "4", "--group", &data("sz8.gens")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("PASS"));
    assert_eq!(text.matches("| match |").count(), 11);
}

#[test]
fn classify_co3_from_shipped_tables() {
    let o = nichols(&["classify", "--group", &data("co3.gens"), "--tables", &data("co3-ctx")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(md_rows(&stdout(&o)), 42);
}

#[test]
fn classify_hs_has_24_rows() {
    let o = nichols(&["classify", "--group", "hs", "--compute-tables"]);
    assert!(o.status.success());
    assert_eq!(md_rows(&stdout(&o)), 24);
}

#[test]
fn json_is_deterministic_and_reparses() {
    let args = ["classify", "--group", "s4", "--format", "json", "--seed", "7"];
    let a = stdout(&nichols(&args));
    let b = stdout(&nichols(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    let w: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, w);
    assert!(a.find("\"group\"").unwrap() < a.find("\"rows\"").unwrap());
}

#[test]
fn csv_carries_q_and_cases() {
    let o = nichols(&["classify", "--group", "s3", "--format", "csv"]);
    let text = stdout(&o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "q") && headers.iter().any(|h| h == "cases"));
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    let cases = headers.iter().position(|h| h == "cases").unwrap();
    assert_eq!(&rows[1][cases], "2:strongly-qr-even-order");
}

#[test]
fn exit_codes() {
    assert_eq!(nichols(&["classes", "--bogus"]).status.code(), Some(2));
    assert_eq!(nichols(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nichols(&["classes", "--group", "no-such-group"]).status.code(), Some(1));
    assert_eq!(nichols(&["classify", "--group", "s3", "--tables", "/no/such/dir"]).status.code(), Some(1));
    let o = nichols(&["braiding", "--group", "s3", "--class-index", "9", "--char", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_paper_fails_loudly_on_wrong_group() {
    let o = nichols(&["verify-paper", "--paper-table", "4", "--group", "s4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("UNMATCHED"));
}

#[test]
fn capacity_errors_are_explicit() {
    let o = nichols(&["chartab", "--group", "s5", "--max-group-order", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the enumeration bound"));
    assert!(o.stdout.is_empty());
    let o = nichols(&["braiding", "--group", "sz8", "--class-index", "3", "--char", "1", "--class-size-cap", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn chartab_export_and_ingest() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("a5.ctx");
    let o = nichols(&["chartab", "--group", "a5", "--export", file.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("%CTX 1\n"));
    let t = nichols_core::chartab::CharacterTable::ingest(&file).unwrap();
    assert_eq!(t.degrees(), [1, 3, 3, 4, 5]);

    let tables = dir.path().join("s4-ctx");
    let o = nichols(&["chartab", "--group", "s4", "--all-centralizers", tables.to_str().unwrap()]);
    assert!(o.status.success());
    let again = nichols(&["chartab", "--group", "s4", "--all-centralizers", tables.to_str().unwrap()]);
    assert!(stdout(&again).contains("unchanged"));
    let o = nichols(&["classify", "--group", "s4", "--tables", tables.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["rows"][1]["source"].as_str().unwrap().starts_with("ingested"));
}

#[test]
fn braiding_report_and_emit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = nichols(&[
        "braiding",
        "--group",
        "s3",
        "--class-rep",
        "(1,2)",
        "--char",
        "1 -1",
        "--check-braid",
        "--check-yd",
        "--emit",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["q"], "-1");
    assert_eq!(r["braid_equation"], true);
    let c: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let entries = c["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 9);
    assert!(entries.iter().all(|e| e["value"] == "1" || e["value"] == "-1"));

    let o = nichols(&[
        "braiding",
        "--group",
        "s4",
        "--class-rep",
        "(1,2)(3,4)",
        "--rep",
        &data("reps/s4-2a-deg2.rep"),
        "--check-braid",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("| module dimension | 6 |"));
}

#[test]
fn data_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(data("s3.gens"), dir.path().join("s3.gens")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_nichols"))
        .args(["classes", "--group", "s3"])
        .env("NICHOLS_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_nichols"))
        .args(["classes", "--group", "s4"])
        .env("NICHOLS_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing file"));
}
