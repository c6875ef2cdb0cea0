use std::process::{Command, Output};

use bergman_cli::report::{ReportDocument, Results};
use bergman_core::exp_classifier::Verdict;

fn bergman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bergman"))
        .args(args)
        .env_remove("BERGMAN_REL_TOL")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (ReportDocument, String) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = bergman(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    (serde_json::from_str(&text).expect("report parses"), text)
}

#[test]
fn moment_of_standard_one() {
    let (doc, _) = json(&["moments", "--weight", "std:alpha=1", "--x", "5"]);
    let Results::Moments { rows, .. } = doc.results else {
        panic!("wrong result kind")
    };
    assert_eq!(rows.len(), 1);
    assert!((rows[0].value - 1.0 / 12.0).abs() < 1e-15);
    assert_eq!(rows[0].rel_err, 0.0);
}

#[test]
fn matching_exponential_pair_is_bounded() {
    let (doc, _) = json(&[
        "exp-classify",
        "--p",
        "2",
        "--nu",
        "alpha=1,beta=0.5,l=1",
        "--omega",
        "alpha=1,beta=0.5,l=1",
    ]);
    let Results::ExpClassification(r) = doc.results else {
        panic!("wrong result kind")
    };
    assert_eq!(r.verdict, Verdict::Bounded);
}

#[test]
fn dp_of_unweighted_pair_is_one() {
    let (doc, _) = json(&["condition", "dp", "--omega", "std:alpha=0", "--nu", "std:alpha=0", "--p", "2", "--n", "50"]);
    let Results::Condition { profile, .. } = doc.results else {
        panic!("wrong result kind")
    };
    assert_eq!(profile.log_values.len(), 51);
    for v in profile.values() {
        assert!((v - 1.0).abs() < 1e-12, "{v}");
    }
}

#[test]
fn json_report_round_trips() {
    for args in [
        &["moments", "--weight", "exp:alpha=1,beta=1,l=1", "--x", "0,2.5,1e7"][..],
        &["condition", "dp", "--omega", "std:alpha=0", "--nu", "std:alpha=2", "--p", "2"],
        &["classify-weight", "--weight", "exp:alpha=1,beta=1,l=1"],
        &["kernel", "--weight", "std:alpha=1", "--z", "0.3-0.1i", "--zeta", "0.5i,0.2", "--k", "2"],
        &["project", "extremal", "--omega", "std:alpha=0", "--nu", "std:alpha=2", "--p", "2", "--n", "3"],
        &["exp-classify", "--p", "2", "--nu", "alpha=1,beta=1,l=1", "--omega", "alpha=1,beta=0.5,l=1", "--corroborate", "100"],
    ] {
        let (doc, text) = json(args);
        let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
        assert_eq!(doc.schema, "bergman-report/1");
        assert_eq!(doc.command, args.iter().chain(&["--format", "json"]).map(|s| s.to_string()).collect::<Vec<_>>());
    }
}

#[test]
fn text_output_is_deterministic() {
    let args = ["classify-weight", "--weight", "std:alpha=2"];
    let a = bergman(&args);
    let b = bergman(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_columns_are_fixed() {
    let out = bergman(&["moments", "--weight", "std:alpha=0", "--x", "1,3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,ln,value,rel_err,backend,underflow");
    assert_eq!(lines[1], "1.0,-0.6931471805599453,0.5,0.0,closed_form,false");
    assert_eq!(lines.len(), 3);
}

#[test]
fn tolerance_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_bergman"))
        .args(["moments", "--weight", "std:alpha=0", "--x", "1", "--format", "json"])
        .env("BERGMAN_REL_TOL", "1e-9")
        .output()
        .unwrap();
    let doc: ReportDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.config.quadrature.rel_tol, 1e-9);

    let (doc, _) = json(&["moments", "--weight", "std:alpha=0", "--x", "1", "--rel-tol", "1e-6"]);
    assert_eq!(doc.config.quadrature.rel_tol, 1e-6);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bergman(&[
        "project",
        "monomial",
        "--omega",
        "exp:alpha=1,beta=0.5,l=1",
        "--n",
        "4",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: ReportDocument = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let Results::MonomialProjection { rows, .. } = doc.results else {
        panic!("wrong result kind")
    };
    assert!(rows.iter().all(|r| (r.coefficient - 1.0).abs() < 1e-12));
}

#[test]
fn grid_projection_reproduces_polynomial() {
    let (doc, _) = json(&["project", "grid", "--omega", "std:alpha=1", "--poly", "1,0,2i", "--at", "0.3,0.2+0.1i"]);
    let Results::GridProjection { rows, .. } = doc.results else {
        panic!("wrong result kind")
    };
    for r in rows {
        let gap = (r.value - r.input).norm();
        assert!(gap < 1e-5 && gap <= r.err, "{r:?}");
    }
}

#[test]
fn usage_errors_exit_with_2() {
    for args in [
        &["moments", "--weight", "foo:alpha=1", "--x", "1"][..],
        &["moments", "--weight", "std:alpha=1", "--x", "abc"],
        &["moments", "--weight", "std:beta=1", "--x", "1"],
        &["exp-classify", "--p", "2", "--nu", "alpha=1,beta=x,l=1", "--omega", "alpha=1,beta=1,l=1"],
        &["condition", "dp", "--omega", "std:alpha=0", "--nu", "std:alpha=0", "--p", "0.5"],
        &["suite", "--criteria", "12"],
        &["frobnicate"],
    ] {
        let out = bergman(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = bergman(&["moments", "--weight", "foo:alpha=1", "--x", "1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("foo"));
}

#[test]
fn domain_errors_exit_with_4() {
    for args in [
        &["moments", "--weight", "std:alpha=-3", "--x", "1"][..],
        &["exp-classify", "--p", "2", "--nu", "alpha=1,beta=2,l=1", "--omega", "alpha=1,beta=1,l=1"],
        &["kernel", "--weight", "std:alpha=0", "--z", "0.999", "--zeta", "0.999"],
        &["project", "grid", "--omega", "std:alpha=0", "--poly", "-1", "--at", "0", "--maximal"],
    ] {
        let out = bergman(args);
        assert_eq!(out.status.code(), Some(4), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn suite_subset_passes() {
    let out = bergman(&["suite", "--criteria", "1,7", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("id,passed,title,summary\n1,true,"));
}
