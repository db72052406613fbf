use std::fs;
use std::process::Command;

use mstlab::RunManifest;

fn lab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lab"))
}

#[test]
fn list_names_every_experiment() {
    let out = lab().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for e in mstlab::catalogue() {
        assert!(text.contains(e.name), "{}", e.name);
    }
}

#[test]
fn run_writes_manifest_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.cfg");
    fs::write(&cfg, "# tiny run\nn_max = 5\nreplicas = 12\nseed = 3\n").unwrap();
    let out_dir = dir.path().join("out");
    let status = lab()
        .args(["run", "mst_exactness", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .status()
        .unwrap();
    assert!(status.success());
    let m: RunManifest = serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!((m.seed, m.replicas, m.params["n_max"]), (3, 12, 5.0));
    assert!(m.passed);
    let csv = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("replica,statistic,value"));
    assert_eq!(lines.count(), 36);
}

#[test]
fn failing_checks_give_exit_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let status = lab()
        .args(["run", "frieze_zeta3", "--replicas", "3", "--set", "n=20", "--set", "tolerance=0", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn errors_give_exit_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let status = lab().args(["run", "no_such_experiment", "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let status = lab().args(["run", "frieze_zeta3", "--set", "bogus=1", "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn sample_writes_components_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let status = lab()
        .args(["sample", "--lambda", "1", "--components", "2", "--mesh", "0.002", "--seed", "4", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("components.json")).unwrap()).unwrap();
    assert_eq!(side["seed"], 4);
    let sigma = side["sigma"].as_array().unwrap();
    assert_eq!(sigma.len(), 2);
    assert!(sigma[0].as_f64().unwrap() >= sigma[1].as_f64().unwrap());
    for i in 0..2 {
        let text = fs::read_to_string(dir.path().join(format!("component_{i}.rgraph"))).unwrap();
        let g = mstlab_core::rgraph::read_edge_length_graph(&text).unwrap();
        assert!(g.graph().is_connected());
        let mass = g.total_mass();
        assert!((mass - sigma[i].as_f64().unwrap()).abs() < 1e-6);
    }
}
