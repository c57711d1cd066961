use std::io::Write;
use std::process::{Command, Output, Stdio};

use hilbgw::cli::{render, run_jobs, suite_jobs, CheckJob, Format, Report, Status, Suite, SuiteConfig};

fn hilbgw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbgw")).args(args).output().expect("binary runs")
}

fn hilbgw_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hilbgw"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Report, String) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = hilbgw(&a);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    (serde_json::from_str(&text).expect("schema"), text)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn dseries_n1_is_zero() {
    let (r, _) = json(&["dseries", "--n", "1"]);
    assert_eq!(r.results[0].value.as_deref(), Some("0"));
}

#[test]
fn dseries_n3_expansion() {
    let (r, text) = json(&["dseries", "--n", "3", "--expand", "7"]);
    let s = r.results[0].series.as_ref().unwrap();
    let c: Vec<String> = s.coefficients.iter().map(|x| x.to_string()).collect();
    assert_eq!(c, ["-5", "-7", "-1", "2", "-1", "-7", "-10", "-7"]);
    assert_eq!(text, golden("dseries_n3.json"));
}

#[test]
fn golden_tables_and_hodge() {
    assert_eq!(json(&["tables", "--n", "3"]).1, golden("tables_n3.json"));
    assert_eq!(json(&["hodge", "--g", "2", "--order", "5"]).1, golden("hodge_g2.json"));
}

#[test]
fn dseries_specialized_n6_is_finite() {
    let (r, _) = json(&["dseries", "--n", "6", "--specialize", "1,5"]);
    let v = r.results[0].value.as_deref().unwrap();
    assert!(v.contains('q') && !v.contains("t1"), "{v}");
}

#[test]
fn json_round_trips() {
    for args in [
        &["dseries", "--n-max", "3", "--expand", "4"][..],
        &["wronskian", "--n-max", "3"],
        &["check", "hodge", "--fast"],
        &["symfun", "rewrite", "sym(d[1]f1*f2)", "--n", "2", "--check"],
        &["nl", "--g", "3", "--n-max", "5"],
    ] {
        let (r, text) = json(args);
        assert_eq!(render(&r, Format::Json), text, "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["symfun", "rewrite", "sym(d[2]f1*f2)", "--n", "3", "--check", "--seed", "7"];
    assert_eq!(hilbgw(&args).stdout, hilbgw(&args).stdout);
    let args = ["check", "symfun", "--fast", "--format", "csv"];
    assert_eq!(hilbgw(&args).stdout, hilbgw(&args).stdout);
}

#[test]
fn symfun_rewrite_example() {
    let o = hilbgw(&["symfun", "rewrite", "sum_i d[1]f_i", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value: -d[1]s1\n"), "{}", stdout(&o));
}

#[test]
fn symfun_reads_stdin() {
    let o = hilbgw_stdin(&["symfun", "rewrite", "--n", "2", "--format", "csv"], "sum_i d[1]f_i\n\nf1*f2\n");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let values: Vec<String> = rows.records().map(|r| r.unwrap()[2].to_string()).collect();
    assert_eq!(values, ["-d[1]s1", "s2"]);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["dseries"][..],
        &["dseries", "--n", "2", "--specialize", "0,1"],
        &["dseries", "--n", "2", "--specialize", "1"],
        &["tables", "--n", "9"],
        &["check", "everything"],
        &["symfun", "rewrite", "f1 +", "--n", "2"],
        &["symfun", "rewrite", "f1", "--n", "2"],
        &["wronskian", "--n", "1"],
        &["hodge", "--g", "0"],
        &["frobnicate"],
    ] {
        assert_eq!(hilbgw(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(hilbgw(&["--help"]).status.code(), Some(0));
}

#[test]
fn passing_checks_exit_0() {
    let o = hilbgw(&["check", "nl", "--fast"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: pass"));
}

#[test]
fn failing_checks_exit_1() {
    let jobs = vec![
        CheckJob::new("ok", || Ok(())),
        CheckJob::new("bad", || Err("Q^3: 1 vs 2".into())),
        CheckJob::new("panics", || panic!("boom")),
    ];
    let report = run_jobs("demo", 1, jobs, false);
    assert_eq!(report.verdict, Status::Fail);
    assert_eq!(report.checks[1].witness.as_deref(), Some("Q^3: 1 vs 2"));
    assert_eq!(report.checks[2].status, Status::Fail);
    let (mut r, _) = json(&["check", "nl", "--fast"]);
    assert_eq!(r.exit_code(), 0);
    r.checks = Some(report);
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("hilbgw-cli-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = hilbgw(&["trace", "--n-max", "3", "--format", "csv", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("kind,id,value,provenance\n"));
    assert!(text.contains("verdict,trace,pass"));
}

#[test]
fn every_suite_has_fast_coverage() {
    let c = SuiteConfig { fast: true, ..SuiteConfig::full(1) };
    let all = suite_jobs(Suite::All, &c);
    for s in ["trace", "lemma34", "degree0", "hodge", "section5", "exxx", "nl", "wronskian", "symfun"] {
        assert!(all.iter().any(|j| j.id.starts_with(&format!("{s}/"))), "{s}");
    }
}
