use std::path::Path;
use std::process::{Command, Output};

use linload::experiments::{self, Settings};
use linload::report::{csv_body, report_path};

fn linload(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linload"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn linload")
}

#[test]
fn lemmas_smoke_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lemmas.csv");
    let res = linload(&["lemmas", "--p", "13", "--m", "3"], &out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# tool: linload "));
    assert!(text.contains("# p: 13\n# m: 3\n"));
    let body = csv_body(&text);
    assert!(body.starts_with("check,claim,cases,violations,observed,required,pass\n"));
    assert!(!body.contains("\r"));
    let report = std::fs::read_to_string(report_path(&out)).unwrap();
    assert!(report.contains("# overall: pass"));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("overall: PASS"));
}

#[test]
fn failing_report_sets_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    // the literal d vs p-d pairing is far from symmetric near d = 2m
    let res = linload(&["figure1", "--p", "257", "--m", "16", "--full-sweep"], &out);
    assert_eq!(res.status.code(), Some(1));
    let body = csv_body(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(body.lines().count(), 1 + 255);
    assert!(body.starts_with("d,exact_probability,statement_bound,proof_bound,"));
}

#[test]
fn budget_refusal_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let res = linload(&["figure1", "--p", "2053", "--m", "32", "--budget", "1000"], &out);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("budget") && err.contains("smaller p"), "{err}");
    assert!(!out.exists());
}

#[test]
fn invalid_parameters_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    assert_eq!(linload(&["lemmas", "--p", "12", "--m", "3"], &out).status.code(), Some(2));
    assert_eq!(
        linload(&["collide3", "--p", "13", "--m", "3", "--x", "1", "--y", "1", "--z", "2"], &out)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        linload(&["transform", "--p", "13", "--m", "3", "--alpha", "0", "--samples", "10"], &out)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn maxload_exact_single_bin() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("one.csv");
    let res = linload(&["maxload-exact", "--p", "13", "--m", "1", "--len", "5"], &out);
    assert!(res.status.success());
    let body = csv_body(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(body, "max_load,count,probability,tail_probability\n5,169,1,1\n");
}

#[test]
fn collide3_prescribed_targets() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let res = linload(
        &["collide3", "--p", "13", "--m", "3", "--x", "2", "--y", "5", "--z", "11", "--targets", "0,1,2"],
        &out,
    );
    assert!(res.status.success());
    let body = csv_body(&std::fs::read_to_string(&out).unwrap());
    let row: Vec<&str> = body.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..7], &["2", "5", "11", "3", "3", "2", "h=(0;1;2)"]);
    assert_eq!(row[7], row[10]);
}

#[test]
fn lemma_checks_with_active_lower_bound() {
    let out = experiments::run_lemma_checks(197, 8, 1, &Settings::default()).unwrap();
    let report = out.report.unwrap();
    let lb = report.check("interval_lower_bound").unwrap();
    assert!(lb.passed);
    assert!(lb.observed.contains("in 7 cases"), "{}", lb.observed);
    assert!(report.overall(), "{}", report.render_table());
}

#[test]
fn lemma_checks_at_257() {
    let out = experiments::run_lemma_checks(257, 16, 3, &Settings { workers: 2, ..Settings::default() }).unwrap();
    let report = out.report.unwrap();
    assert!(report.overall(), "{}", report.render_table());
}

#[test]
fn transform_demo_affine_agreement() {
    let out = experiments::run_transform_demo(1031, 32, 77, 5, 20_000, 4, false, &Settings::default()).unwrap();
    assert!(out.passed(), "{}", out.report.unwrap().render_table());
    let exhaustive = experiments::run_transform_demo(257, 16, 77, 5, 2000, 4, true, &Settings::default()).unwrap();
    let r = exhaustive.report.unwrap();
    assert!(r.check("affine_exact_histogram").unwrap().passed);
}

#[test]
fn moderate_field_mc_mean_is_small() {
    let modulus = linload::Modulus::new(21787, 128).unwrap();
    let cfg = linload::estimate::McConfig::new(modulus, linload::KeySet::interval(128).unwrap(), 20_000, 1);
    let est = linload::estimate::mc_linear_maxload(&cfg).unwrap();
    assert!(est.mean <= 8.0, "{}", est.mean);
    let exact = experiments::exact_interval_mean(1031, 32, &Settings::default()).unwrap();
    assert!(linload::report::prob_to_f64(&exact) <= 8.0);
}
