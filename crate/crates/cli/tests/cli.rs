use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goodcurves"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn quality_json_and_csv() {
    let o = run(&["quality", "1", "8", "9"]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    assert_eq!(v["quality_lower"], "1.22629");
    assert_eq!(v["quality_exact"], true);

    let o = run(&["--format", "csv", "quality", "1", "8", "9"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "a,b,c,quality_lower,quality_upper,quality_exact,sig_digits,good");
    assert_eq!(lines.next().unwrap(), "1,8,9,1.22629,1.22629,true,6,true");
}

#[test]
fn exit_codes() {
    let o = run(&["quality", "1", "2", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: PreconditionViolation"));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "C13", "1", "2"]).status.code(), Some(2));
    assert_eq!(run(&["seq", "C5", "--depth", "1"]).status.code(), Some(1));
}

#[test]
fn szpiro_of_c5_curve() {
    let o = run(&["szpiro", "-32767", "-32768", "-32768", "0", "0"]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    assert_eq!(v["sigma"], "6.27662");
    assert_eq!(v["verdict"], "certified-good");
    assert_eq!(v["conductor_factored"], "2*5^2*11*661*1181");
}

#[test]
fn family_invariants() {
    let o = run(&["invariants", "C5", "1", "1"]);
    assert_eq!(json_lines(&o)[0]["A"], "1152499307174559745");
    let o = run(&["torsion", "0", "-1", "1", "-10", "-20"]);
    assert_eq!(json_lines(&o)[0]["torsion"], "C5");
}

#[test]
fn sequence_rows() {
    let o = run(&["--verify", "seq", "C3", "--depth", "1"]);
    assert!(o.status.success());
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["a"], "162");
    assert_eq!(rows[0]["quality_lower"], "1.10891");
    assert_eq!(rows[1]["digits_a"], 145);
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn catalog_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let triples = dir.path().join("triples.txt");
    let db = dir.path().join("db.jsonl");
    write(&triples, "1 8 9\n5 27 32\n1 48 49\n1 63 64\n1 80 81\n32 49 81\n");

    let o = run(&["ingest", "--file", triples.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json_lines(&o).len(), 6);

    let o = run(&[
        "--format", "csv", "build-db", "--source", triples.to_str().unwrap(), "--kinds", "C3,C2xC2",
        "--out", db.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("T,D_T,G_T,undecided,M_T\n"));
    assert!(db.exists());

    let o = run(&["--format", "csv", "hist", "--in", db.to_str().unwrap(), "--width", "0.5", "--all"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("bin_start,bin_end,count\n"));

    let o = run(&["fixtures-verify", "--catalog", db.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bad_triple_file() {
    let dir = tempfile::tempdir().unwrap();
    let triples = dir.path().join("bad.txt");
    write(&triples, "1 8 9\n1 2 3\n");
    let o = run(&["ingest", "--file", triples.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("ValidationError") && err.contains("line 2"), "{err}");
}

#[test]
fn deterministic_mining() {
    let a = run(&["--jobs", "1", "mine", "--bound", "2000"]);
    let b = run(&["--jobs", "4", "mine", "--bound", "2000"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
