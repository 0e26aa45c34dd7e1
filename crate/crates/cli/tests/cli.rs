use std::fs;
use std::process::{Command, Output};

use lmr_cli::report::ReproductionReport;

fn lmr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn reproduce(args: &[&str]) -> (Output, ReproductionReport) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut full = vec!["reproduce"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = lmr(&full);
    let text = fs::read_to_string(&path).unwrap_or_default();
    let report = ReproductionReport::from_json(&text).unwrap_or_else(|e| panic!("{e}: {text:?} {o:?}"));
    (o, report)
}

#[test]
fn reproduce_lin_writes_a_report() {
    let (o, r) = reproduce(&["lin"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert_eq!(r.proposition_id, "lin");
    assert_eq!(r.parameter, None);
    assert!((r.root - 7.725532796173).abs() < 1e-9, "{}", r.root);
    assert!((r.constant - 0.88071).abs() < 5e-5);
    assert!(r.bracket[0] <= r.root && r.root <= r.bracket[1]);
    assert!(r.residual < 1e-12);
    assert_eq!(r.engine_version, lmr_core::VERSION);
}

#[test]
fn report_round_trips() {
    let (_, r) = reproduce(&["stolarsky"]);
    let text = r.to_json();
    let back = ReproductionReport::from_json(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.to_json(), text);
}

#[test]
fn reproduce_identric_at_ln2() {
    let (o, r) = reproduce(&["identric", "--p", "0.6931471805599453"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((r.constant - 1.0154).abs() < 5e-4);
    assert!((r.root - 0.0463812).abs() < 1e-6);
}

#[test]
fn parameter_errors_are_usage_errors() {
    for args in [
        &["reproduce", "identric", "--p", "0.5"][..],
        &["reproduce", "cusa"],
        &["reproduce", "lin", "--p", "0.5"],
        &["reproduce", "cusa", "--p", "1.2"],
        &["reproduce", "lin", "--tol-x", "0"],
        &["reproduce", "nosuch"],
        &["frobnicate"],
    ] {
        let o = lmr(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut r: ReproductionReport| {
        r.runtime_ms = 0;
        r.to_json()
    };
    let (_, a) = reproduce(&["cusa", "--p", "0.9"]);
    let (_, b) = reproduce(&["cusa", "--p", "0.9"]);
    assert_eq!(strip(a), strip(b));
    let a = lmr(&["scan", "I-new1:0.3", "--grid", "500"]);
    let b = lmr(&["scan", "I-new1:0.3", "--grid", "500"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tolerances_are_recorded() {
    let (o, r) = reproduce(&["lin", "--tol-x", "1e-10", "--tol-f", "1e-13"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(r.tolerances.tol_x, 1e-10);
    assert_eq!(r.tolerances.tol_f, Some(1e-13));
    assert!((r.root - 7.725532796173).abs() < 1e-9);
}

#[test]
fn verify_series() {
    let o = lmr(&["verify", "series"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("199 residuals, nonzero at []"), "{s}");
    assert!(s.contains("u_8 = 212772744"));
}

#[test]
fn verify_tables() {
    let o = lmr(&["verify", "tables"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.starts_with("PASS [tables]")).count(), 16);
    assert!(s.contains("16/16 checks passed"));
}

#[test]
fn verify_inequalities() {
    let o = lmr(&["verify", "inequalities", "--grid", "10000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.lines().filter(|l| l.contains("[inequalities]")).all(|l| l.contains(": 0 violations")));
    assert_eq!(lmr(&["verify", "inequalities", "--grid", "10"]).status.code(), Some(2));
    assert_eq!(lmr(&["verify", "series", "--nmax", "1"]).status.code(), Some(2));
}

fn scan_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().strip_prefix("# ").expect("header line");
    let cols: Vec<String> = header.split(',').map(str::to_string).collect();
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (cols, rows)
}

#[test]
fn scan_ly_h() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ly.csv");
    let o = lmr(&["scan", "LY-h", "--grid", "1000", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let (cols, rows) = scan_rows(&fs::read_to_string(path).unwrap());
    assert_eq!(cols.first().map(String::as_str), Some("x"));
    assert_eq!(cols.last().map(String::as_str), Some("min_slack"));
    assert_eq!(rows.len(), 1000);
    assert!(rows.iter().all(|r| r.len() == cols.len() && r[cols.len() - 1] > 0.0));
}

#[test]
fn scan_z_y2() {
    let o = lmr(&["scan", "Z-Y2", "--grid", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let (cols, rows) = scan_rows(&stdout(&o));
    assert_eq!(cols.len(), 5);
    assert_eq!(rows.len(), 1000);
    assert!(rows.iter().all(|r| r[0] > 0.0 && r[0] < std::f64::consts::FRAC_PI_2));
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    assert!(rows.iter().all(|r| r[4] >= -1e-12));
    // Near 0 every member rounds to the same double.
    assert!(rows.iter().filter(|r| r[0] > 0.1).all(|r| r[1] <= r[2] && r[2] < r[3]));
}

#[test]
fn scan_unknown_chain() {
    assert_eq!(lmr(&["scan", "nosuch"]).status.code(), Some(2));
    assert_eq!(lmr(&["scan", "Zhu2:0.95"]).status.code(), Some(2));
}
