use std::io::Write;
use std::process::{Command, Output};

fn k3lat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3lat")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn generic_scenario_reports_minus_64() {
    let out = k3lat(&["scenario", "verify", "generic-standard", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["data"]["ns_discriminant"], "-64");
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn orbit_table_up_to_eight() {
    let out = k3lat(&["orbit", "table", "--delta-max", "8", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    let pairs: Vec<(i64, u64)> = rows
        .iter()
        .filter_map(|r| Some((r["delta"].as_i64()?, r["n_delta"].as_u64()?)))
        .collect();
    assert_eq!(pairs, vec![(1, 1), (2, 10), (4, 15), (5, 1), (6, 6), (8, 15)]);
}

#[test]
fn malformed_json_is_an_input_error() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{{\"gram\": [[2, 1], [1").unwrap();
    let out = k3lat(&["lattice", "info", "--file", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = k3lat(&["phi", "--matrix", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_json_round_trips_through_files() {
    let out = k3lat(&["lattice", "sum", "U", "D6^2", "A1^2"]);
    assert_eq!(out.status.code(), Some(0));
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(&out.stdout).unwrap();
    let info = k3lat(&["lattice", "info", "--file", file.path().to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&info.stdout).unwrap();
    assert_eq!(v["determinant"], "-64");
    assert_eq!(v["signature"], serde_json::json!([1, 15]));
}

#[test]
fn odd_lattice_has_no_discriminant_form() {
    let out = k3lat(&["disc", "form", "<1>"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_scenario_and_bad_vector_are_input_errors() {
    assert_eq!(k3lat(&["scenario", "verify", "nonexistent"]).status.code(), Some(2));
    assert_eq!(k3lat(&["orbit", "classify", "1,2,3"]).status.code(), Some(2));
}

#[test]
fn quaternion_and_ks() {
    let out = k3lat(&["quat", "--a", "-1", "--b", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["split"], false);
    let out = k3lat(&["ks", "--delta", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_split"], true);
}

#[test]
fn t2_orbits_and_json_determinism() {
    let a = k3lat(&["disc", "orbits", "U(2)^2+A1^2", "--json"]);
    let b = k3lat(&["disc", "orbits", "U(2)^2+A1^2", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["sizes"], serde_json::json!([1, 1, 12, 15, 15, 20]));
}

#[test]
fn symbolic_suite_passes() {
    let out = k3lat(&["symbolic", "verify-d1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn phi_of_identity_from_file() {
    let one = "[1,1,0,1]";
    let zero = "[0,1,0,1]";
    let rows: Vec<String> =
        (0..4).map(|i| format!("[{}]", (0..4).map(|j| if i == j { one } else { zero }).collect::<Vec<_>>().join(","))).collect();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "[{}]", rows.join(",")).unwrap();
    let out = k3lat(&["phi", "--matrix", file.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["determinant"], "1");
    assert_eq!(v["phi"][0], serde_json::json!([1, 0, 0, 0, 0, 0]));
}
