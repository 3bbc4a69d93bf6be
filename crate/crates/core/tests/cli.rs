use std::path::Path;
use std::process::Command;

use dwalg::diffop::DiffOp;
use dwalg::dwalgebra::center;
use dwalg::gegenbauer::generators;
use dwalg::json::diffop_to_json;
use dwalg::matpoly::MatPoly;
use serde_json::Value;

fn dwalg(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dwalg"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write_op(dir: &Path, name: &str, op: &DiffOp) -> String {
    let path = dir.join(name);
    std::fs::write(&path, diffop_to_json(op)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(dwalg(&[]).0, 2);
    assert_eq!(dwalg(&["frobnicate"]).0, 2);
    assert_eq!(dwalg(&["eigencheck", "--wmax", "x"]).0, 2);
    assert_eq!(dwalg(&["eigencheck", "--n", "1/0"]).0, 2);
    assert_eq!(dwalg(&["orthogonality", "--n", "5", "--p", "1"]).0, 2);
    assert_eq!(dwalg(&["eigencheck", "--n", "4", "--p", "3"]).0, 2);
    assert_eq!(dwalg(&["decompose", "--op", "/nonexistent/op.json"]).0, 2);
}

#[test]
fn trivial_eigencheck_passes() {
    let (code, out) = dwalg(&["eigencheck", "--wmax", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS Q_0 D1 = Lambda_0(D1) Q_0"));
}

#[test]
fn failing_relation_exits_with_one_and_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rel.json");
    let (code, _) = dwalg(&["verify-relations", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let report = read_json(&path);
    assert_eq!(report["command"], "verify-relations");
    assert_eq!(report["schema_version"], 1);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 25);
    let failed: Vec<&Value> = checks.iter().filter(|c| c["status"] == "fail").collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0]["witness"].is_object());
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |p: &Path| {
        let mut v = read_json(p);
        v.as_object_mut().unwrap().remove("elapsed");
        serde_json::to_string(&v).unwrap()
    };
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert_eq!(
            dwalg(&[
                "eigencheck",
                "--wmax",
                "2",
                "--n",
                "6",
                "--p",
                "2",
                "--json",
                p.to_str().unwrap()
            ])
            .0,
            0
        );
    }
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn decompose_reads_operator_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = generators();
    let member = write_op(dir.path(), "d3d4.json", &(&g.d3 * &g.d4));
    let json = dir.path().join("out.json");
    assert_eq!(
        dwalg(&[
            "decompose",
            "--op",
            &member,
            "--json",
            json.to_str().unwrap()
        ])
        .0,
        0
    );
    assert!(read_json(&json)["data"]["decomposition"]["table"].is_array());

    let dx = write_op(
        dir.path(),
        "dx.json",
        &DiffOp::monomial(1, MatPoly::identity(2)),
    );
    assert_eq!(dwalg(&["decompose", "--op", &dx]).0, 1);

    std::fs::write(
        dir.path().join("bad.json"),
        "{\"order\": 3, \"coeffs\": []}",
    )
    .unwrap();
    assert_eq!(
        dwalg(&[
            "decompose",
            "--op",
            dir.path().join("bad.json").to_str().unwrap()
        ])
        .0,
        2
    );
}

#[test]
fn center_decompose_reads_operator_files() {
    let dir = tempfile::tempdir().unwrap();
    let (c1, c2) = center();
    let op = write_op(dir.path(), "c.json", &(&(c1 * c2) + c1));
    let (code, out) = dwalg(&["center-decompose", "--op", &op]);
    assert_eq!(code, 0, "{out}");
    let d1 = write_op(dir.path(), "d1.json", &generators().d1);
    assert_eq!(dwalg(&["center-decompose", "--op", &d1]).0, 1);
}

#[test]
fn centralizer_reports_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("c.json");
    let code = dwalg(&[
        "centralizer",
        "--order",
        "2",
        "--deg",
        "2",
        "--targets",
        "c1c2",
        "--json",
        json.to_str().unwrap(),
    ])
    .0;
    assert_eq!(code, 0);
    let report = read_json(&json);
    assert_eq!(report["data"]["dimension"], 5);
    assert_eq!(report["data"]["method"]["kind"], "symbolic");
    assert_eq!(report["data"]["basis"].as_array().unwrap().len(), 5);
}

#[test]
fn orthogonality_and_selftest_pass() {
    assert_eq!(
        dwalg(&["orthogonality", "--n", "4", "--p", "1", "--wmax", "6"]).0,
        0
    );
    assert_eq!(dwalg(&["selftest"]).0, 0);
    assert_eq!(dwalg(&["mop", "--wmax", "3"]).0, 0);
}

#[test]
fn bridge_check_reports_residuals() {
    let (code, out) = dwalg(&["bridge-check", "--eigen-only"]);
    assert_eq!(code, 1);
    assert!(out
        .lines()
        .any(|l| l.starts_with("FAIL Hermite relation quartic in F")));
}
