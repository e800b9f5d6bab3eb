use std::process::{Command, Output};

use qfi_core::report::from_json;

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/qubit_witness.json");

fn qfi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfi")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn catalog_lists_families() {
    let o = qfi(&["catalog"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("sld") && text.contains("f(0) = 1/2"));
    assert!(text.contains("f~(x) = sqrt(x)"));

    let o = qfi(&["catalog", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let entries = v.as_array().unwrap();
    let harmonic = entries.iter().find(|e| e["name"] == "harmonic").unwrap();
    assert!(harmonic["tilde"].is_null());
}

#[test]
fn selftest_passes() {
    let o = qfi(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let common = ["verify", "--instances", "3", "--dims", "2,3", "--num-obs", "2", "--t-grid", "0,0.5,1"];
    let o = qfi(&[&common[..], &["--out", json.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let report = from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report.instances, 2 * 3 * 3);

    let o = qfi(&[&common[..], &["--format", "csv", "--out", csv.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("check,n,N,f,g,t,pass,fail,worst_margin,clamps"));
    assert_eq!(text.lines().count() - 1, report.rows.len());
}

#[test]
fn replay_reproduces_a_single_instance() {
    let o = qfi(&["verify", "--seed", "5", "--replay", "3,2,degenerate,17", "--checks", "conj1"]);
    assert_eq!(o.status.code(), Some(0));
    let report = from_json(&stdout(&o)).unwrap();
    assert_eq!(report.instances, 1);
    let id = report.config.only.unwrap();
    assert_eq!((id.seed, id.n, id.num_obs, id.index), (5, 3, 2, 17));

    let o = qfi(&["verify", "--replay", "3,2,sideways,17"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compute_reports_the_witness() {
    let o = qfi(&["compute", FIXTURE, "--t-grid", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["det_cov"], 1.0);
    let sld = &v["functions"][0];
    assert_eq!(sld["det_qov"], 0.0625);
    let conj1 = sld["reports"].as_array().unwrap().iter().find(|r| r["name"] == "conj1").unwrap();
    assert_eq!(conj1["components"]["remainder"], 0.375);
}

#[test]
fn bad_input_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(FIXTURE).unwrap().replace("[0.25, 0.0]", "[0.15, 0.0]");
    std::fs::write(&bad, text).unwrap();
    let o = qfi(&["compute", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("trace"), "{err}");

    for args in [
        &["verify", "--checks", "nope"][..],
        &["verify", "--pairs", "sld"],
        &["verify", "--format", "xml"],
        &["verify", "--tol", "-1"],
        &["bogus"],
    ] {
        assert_eq!(qfi(args).status.code(), Some(2), "{args:?}");
    }
}
