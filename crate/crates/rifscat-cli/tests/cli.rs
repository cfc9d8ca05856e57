use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rifscat(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rifscat"))
        .args(args)
        .env("RIFSCAT_OUT_DIR", dir)
        .output()
        .expect("spawn rifscat")
}

fn ok(dir: &Path, args: &[&str]) {
    let o = rifscat(dir, args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn every_command_writes_its_artifact() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    ok(p, &["dispersion", "--points", "4"]);
    ok(p, &["scenario", "--delta-n-list", "1e-6,1e-2"]);
    ok(p, &["smatrix", "--lambda", "400nm"]);
    ok(p, &["spectrum", "--points", "10", "--interval-points", "4"]);
    ok(p, &["labspectrum", "--points", "20"]);
    ok(p, &["corrmap", "--points", "8"]);
    ok(p, &["table1", "--velocities", "800nm", "--scan-points", "50"]);
    ok(p, &["verify", "--configs", "3"]);
    for f in ["dispersion.csv", "spectrum.csv", "labspectrum.csv", "corrmap.csv"] {
        let t = std::fs::read_to_string(p.join(f)).unwrap();
        assert!(t.starts_with("# rifscat"), "{f}");
        assert!(t.contains("# config_hash: ") && t.contains("# units: ") && t.contains("# legend: "), "{f}");
    }
    for f in ["scenario.json", "smatrix.json", "table1.json", "verify.json", "corrmap.json"] {
        let v = read_json(&p.join(f));
        assert_eq!(v["metadata"]["config_hash"].as_str().unwrap().len(), 64, "{f}");
    }
    let s = read_json(&p.join("smatrix.json"));
    assert!(s["data"][0]["residuals"]["quasi_unitarity"].as_f64().unwrap() < 1e-8);
    let sc = read_json(&p.join("scenario.json"));
    let seq: Vec<&str> =
        sc["data"][0]["sequence"].as_array().unwrap().iter().map(|x| x["scenario"].as_str().unwrap()).collect();
    assert_eq!(seq, ["a", "b", "c", "d", "e"]);
    let t = read_json(&p.join("table1.json"));
    assert!((t["data"][0]["lambda_vm_nm"].as_f64().unwrap() - 800.0).abs() < 1e-6);
    assert!(read_json(&p.join("verify.json"))["data"].as_array().unwrap().iter().all(|o| o["pass"] == true));
}

#[test]
fn reruns_are_byte_identical() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let args = ["spectrum", "--points", "12", "--interval-points", "6", "--threads", "4"];
    ok(p, &args);
    let a = std::fs::read(p.join("spectrum.csv")).unwrap();
    ok(p, &args[..5]);
    assert_eq!(a, std::fs::read(p.join("spectrum.csv")).unwrap());
}

#[test]
fn config_file_with_flag_override() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let cfg = p.join("run.conf");
    std::fs::write(&cfg, "# speed as a matched wavelength\nu = 800nm\ndelta_n = 1e-5\nvelocities = 800nm\nscan_points = 40\n")
        .unwrap();
    let c = cfg.to_str().unwrap();
    ok(p, &["table1", "--config", c, "--output", p.join("a.json").to_str().unwrap()]);
    ok(p, &["table1", "--config", c, "--delta-n", "2e-5", "--output", p.join("b.json").to_str().unwrap()]);
    let (a, b) = (read_json(&p.join("a.json")), read_json(&p.join("b.json")));
    assert_eq!(a["metadata"]["config"]["delta_n"], "1e-5");
    assert_eq!(b["metadata"]["config"]["delta_n"], "2e-5");
    assert_ne!(a["metadata"]["config_hash"], b["metadata"]["config_hash"]);
}

#[test]
fn output_placement_does_not_change_the_hash() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    ok(p, &["scenario", "--delta-n-list", "1e-4"]);
    ok(p, &["scenario", "--delta-n-list", "1e-4", "--output", p.join("x/other.json").to_str().unwrap()]);
    let (a, b) = (read_json(&p.join("scenario.json")), read_json(&p.join("x/other.json")));
    assert_eq!(a["metadata"]["config_hash"], b["metadata"]["config_hash"]);
}

#[test]
fn velocity_forms_agree() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    ok(p, &["table1", "--velocities", "2/3c,0.6666666666666666c,199861638.6666667m/s", "--scan-points", "20"]);
    let t = read_json(&p.join("table1.json"));
    let us: Vec<f64> = t["data"].as_array().unwrap().iter().map(|r| r["u_m_per_s"].as_f64().unwrap()).collect();
    assert!(us.iter().all(|u| (u / us[0] - 1.0).abs() < 1e-12), "{us:?}");
}

#[test]
fn bad_configuration_exits_with_code_two() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    for args in [
        &["scenario", "--delta-n-list", ""][..],
        &["table1", "--velocities", " , "],
        &["smatrix"],
        &["smatrix", "--omega", "1e14", "--lambda", "400nm"],
        &["dispersion", "--omega-min", "2e15", "--omega-max", "1e15"],
        &["dispersion", "--u", "1.5c"],
        &["table1", "--format", "csv"],
    ] {
        let o = rifscat(p, args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let cfg = p.join("bad.conf");
    std::fs::write(&cfg, "delta_nn = 1e-6\n").unwrap();
    let o = rifscat(p, &["scenario", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta_nn"));
}

#[test]
fn stdout_output() {
    let d = tempfile::tempdir().unwrap();
    let o = rifscat(d.path(), &["dispersion", "--points", "2", "--side", "R", "--output", "-"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("omega,side,mode")));
    assert!(std::fs::read_dir(d.path()).unwrap().next().is_none());
}
