use std::process::{Command, Output};

use psineq::harness::{parse_matrix, read_matrix_file, write_matrix_file};
use psineq::linalg::HermitianMatrix;

fn psineq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psineq")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SMALL: &[&str] = &[
    "verify",
    "--dims",
    "2,3",
    "--trials",
    "4",
    "--alphas",
    "0:1:0.5",
    "--ensembles",
    "gram,commuting",
];

#[test]
fn help_documents_every_flag() {
    let text = stdout(&psineq(&["verify", "--help"]));
    for flag in [
        "--dims",
        "--trials",
        "--alphas",
        "--seed",
        "--tol-rel",
        "--tol-abs",
        "--format",
        "--out",
        "--ensembles",
        "--norms",
        "--checks",
    ] {
        assert!(text.contains(flag), "missing {flag} in:\n{text}");
    }
    for sub in ["verify", "replay", "chernoff", "minpair"] {
        assert!(stdout(&psineq(&["--help"])).contains(sub));
    }
}

#[test]
fn verify_writes_json_and_succeeds_on_clean_ensembles() {
    let o = psineq(SMALL);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["config", "checks", "lemma2_probe", "summary"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let cell = &v["checks"][0];
    for key in [
        "id",
        "alpha",
        "norm",
        "dim",
        "ensemble",
        "seed",
        "worst_slack",
        "passed",
    ] {
        assert!(cell.get(key).is_some(), "missing cell field {key}");
    }
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn verify_csv_has_one_row_per_cell() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&psineq(SMALL))).unwrap();
    let mut args = SMALL.to_vec();
    args.extend(["--format", "csv"]);
    let csv = stdout(&psineq(&args));
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("id,alpha,norm,dim,ensemble"));
    assert_eq!(lines.count(), json["checks"].as_array().unwrap().len());
}

#[test]
fn violations_exit_with_one() {
    let o = psineq(&[
        "verify",
        "--dims",
        "2",
        "--trials",
        "20",
        "--alphas",
        "0.5",
        "--ensembles",
        "pure",
        "--checks",
        "EigDominance",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL EigDominance"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "--alphas", "0:2:0.5"][..],
        &["verify", "--dims", "2,x"],
        &["verify", "--norms", "kyfan:3", "--dims", "2"],
        &["verify", "--ensembles", "wishart"],
        &["verify", "--format", "xml"],
        &["verify", "--trials", "0"],
        &["replay", "dim=2,seed=1"],
        &["frobnicate"],
    ] {
        assert_eq!(psineq(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn io_errors_exit_with_three() {
    let o = psineq(&[
        "verify",
        "--dims",
        "2",
        "--trials",
        "1",
        "--out",
        "/nonexistent/dir/report.json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        psineq(&["chernoff", "/nonexistent/a.txt", "/nonexistent/b.txt"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn minpair_and_chernoff_on_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let s = dir.path().join("s.txt");
    std::fs::write(&a, "2\n2 0\n0 1\n").unwrap();
    std::fs::write(&b, "2\n1 0\n0 3\n").unwrap();
    let paths = [a.to_str().unwrap(), b.to_str().unwrap()];

    let o = psineq(&["minpair", paths[0], paths[1], "--out", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let got = read_matrix_file(&s).unwrap();
    let expected = HermitianMatrix::diagonal(&[1.0, 1.0]).unwrap();
    assert!(got.sub(&expected).frobenius_norm() < 1e-12);

    let printed = parse_matrix(&stdout(&psineq(&["minpair", paths[0], paths[1], "--pivot", "a"]))).unwrap();
    assert!(printed.sub(&expected).frobenius_norm() < 1e-12);

    // Two orthogonal pure states: Q = 0 and trace distance 1.
    write_matrix_file(&a, &HermitianMatrix::diagonal(&[1.0, 0.0]).unwrap()).unwrap();
    write_matrix_file(&b, &HermitianMatrix::diagonal(&[0.0, 1.0]).unwrap()).unwrap();
    let text = stdout(&psineq(&["chernoff", paths[0], paths[1]]));
    assert!(text.contains("q 0.0") && text.contains("trace_distance 1.0"), "{text}");

    std::fs::write(&a, "2\n1 2\n0 1\n").unwrap();
    assert_eq!(
        psineq(&["chernoff", paths[0], paths[1]]).status.code(),
        Some(2),
        "non-Hermitian input"
    );
    std::fs::write(&a, "1\n-1\n").unwrap();
    std::fs::write(&b, "1\n1\n").unwrap();
    assert_eq!(
        psineq(&["minpair", paths[0], paths[1]]).status.code(),
        Some(2),
        "indefinite input"
    );
}

#[test]
fn replay_prints_matrices_and_both_pivots() {
    let o = psineq(&["replay", "dim=3,ensemble=commuting,seed=42,alpha=0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for needle in [
        "A =",
        "B =",
        "parallel_min pivot B",
        "parallel_min pivot A",
        "EigDominance alpha=0.5",
    ] {
        assert!(text.contains(needle), "missing '{needle}'");
    }
    let warned = psineq(&["replay", "dim=3,ensemble=commuting,seed=42,hash=0000000000000000"]);
    assert!(String::from_utf8_lossy(&warned.stderr).contains("warning"));
}
