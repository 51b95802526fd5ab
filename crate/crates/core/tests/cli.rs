use std::path::Path;
use std::process::{Command, Output};

use decolab::fock::{ModeDims, QubitPure};
use decolab::io::{read_state, write_state};
use decolab::numerics::cr;

fn decolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decolab")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write_example(dir: &Path) -> String {
    let q = QubitPure::normalized(cr(1.0), cr(0.0), cr(0.0), cr(2.0)).unwrap();
    let path = dir.join("psi.json");
    write_state(&path, &q.to_state()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn evolve_writes_damped_state() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_example(dir.path());
    let out = dir.path().join("out.json");
    let o = decolab(&["evolve", "--in", &input, "--out", out.to_str().unwrap(), "--eta-a", "0.5", "--eta-b", "0.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = read_state(&out).unwrap();
    assert_eq!(s.dims(), ModeDims::qubits());
    // |11⟩ population (4/5)·η²
    assert!((s.rho()[(3, 3)].re - 0.2).abs() < 1e-12);
}

#[test]
fn concurrence_reports_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_example(dir.path());
    let o = decolab(&["concurrence", "--in", &input, "--eta-a", "0.75", "--eta-b", "0.75"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    let closed = v["closed_form"]["c2"].as_f64().unwrap();
    assert!((v["numerical"].as_f64().unwrap() - closed).abs() < 1e-9);
    assert!((v["closed_form"]["threshold"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn witness_presets_and_hz() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_example(dir.path());
    let v = stdout_json(&decolab(&["witness", "--in", &input, "--spec", "d3"]));
    assert_eq!(v["verdict"], "ENTANGLED");
    let spec = dir.path().join("custom.json");
    std::fs::write(&spec, r#"{ "ordering": "nom_a", "indices": [[1,0,0],[0,0,1],[1,0,1],[1,1,1]] }"#).unwrap();
    let w = stdout_json(&decolab(&["witness", "--in", &input, "--spec", spec.to_str().unwrap()]));
    assert_eq!(w["value"], v["value"]);
    let hz = stdout_json(&decolab(&["witness", "--in", &input, "--spec", "hz"]));
    // |⟨ab⟩|² − ⟨a†a⟩⟨b†b⟩ = 0.16 − 0.64
    assert!((hz["w2"].as_f64().unwrap() + 0.48).abs() < 1e-12);
    assert_eq!(hz["verdict"], "INCONCLUSIVE");
}

#[test]
fn sweep_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sde_frozen_state.json");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = decolab(&["sweep", "--in", input, "--plan", "INVERSE", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().next().unwrap(), "eta,min_eig,log_negativity,concurrence");
    assert_eq!(text.lines().count(), 102);
    let frozen = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/sde_frozen_sweep.csv")).unwrap();
    assert_eq!(text, frozen);
    // unphysical rows leave the entanglement columns empty
    assert!(text.lines().nth(1).unwrap().ends_with(",,"));
}

#[test]
fn forward_sweep_with_witness_column() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_example(dir.path());
    let o = decolab(&["sweep", "--in", &input, "--plan", "UNBALANCED:0.9", "--grid", "0.2,0.6,1", "--witness", "d3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "eta,min_eig,log_negativity,concurrence,det_d3");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn invert_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let input = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sde_frozen_state.json");
    let out = dir.path().join("pre.json");
    let o = decolab(&["invert", "--in", input, "--eta", "0.875", "--two-sided", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(summary["physical"], true);
    assert!(summary["log_negativity"].as_f64().unwrap() > 0.05);
    read_state(&out).unwrap();

    let hits = dir.path().join("hits.json");
    let o = decolab(&["search-sde", "--trials", "20", "--seed", "0", "--out", hits.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&hits).unwrap()).unwrap();
    assert!(!v["hits"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_example(dir.path());
    assert_eq!(decolab(&["invert", "--in", &input, "--eta", "0"]).status.code(), Some(2));
    assert_eq!(decolab(&["evolve", "--in", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(decolab(&["sweep", "--in", &input, "--plan", "SIDEWAYS"]).status.code(), Some(2));
    assert_eq!(decolab(&["frobnicate"]).status.code(), Some(2));
    let wide = dir.path().join("wide.json");
    std::fs::write(&wide, r#"{ "dims": [1, 3], "rho": [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]] }"#).unwrap();
    assert_eq!(decolab(&["concurrence", "--in", wide.to_str().unwrap()]).status.code(), Some(2));

    // a matrix with a negative eigenvalue has no log-negativity
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{ "dims": [1, 2], "rho": [[1.5,0],[0,0],[0,0],[-0.5,0]] }"#).unwrap();
    assert_eq!(decolab(&["concurrence", "--in", bad.to_str().unwrap()]).status.code(), Some(2));
}
