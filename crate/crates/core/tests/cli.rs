//! The `staticgeo` binary: exit codes, reports and output files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_staticgeo"));
    c.env_remove("STATICGEO_THREADS");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn config(name: &str, body: &str) -> PathBuf {
    let path = scratch(name).join("run.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], cfg: &PathBuf) -> Output {
    bin().args(args).arg("--config").arg(cfg).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

const ISOTROPIC: &str = "[triple]\nfixture = \"schwarzschild-isotropic\"\nn = 3\nm = 1.0\n";

#[test]
fn verify_schwarzschild_passes_and_embeds_config() {
    let cfg = config("verify-pass", ISOTROPIC);
    let out = run(&["verify"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["config"]["triple"]["fixture"], "schwarzschild-isotropic");
    assert_eq!(v["config"]["triple"]["n"], 3);
}

#[test]
fn verify_non_static_reports_the_laplacian() {
    let cfg = config("verify-non-static", "[triple]\nfixture = \"non-static\"\n");
    let out = run(&["verify"], &cfg);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    let findings: Vec<&str> = v["findings"].as_array().unwrap().iter().filter_map(|f| f.as_str()).collect();
    assert!(findings.iter().any(|f| f.contains("ΔN ≠ 0")), "{findings:?}");
}

#[test]
fn command_line_overrides_the_config_file() {
    let cfg = config("overrides", ISOTROPIC);
    let out = run(&["verify", "--fixture", "schwarzschild-areal", "--n", "4", "--m", "0.5"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["triple"]["fixture"], "schwarzschild-areal");
    assert_eq!(v["config"]["triple"]["n"], 4);
}

#[test]
fn rigidity_writes_report_and_profile() {
    let cfg = config("rigidity-out", ISOTROPIC);
    let dir = scratch("rigidity-out-dir");
    let out = run(&["rigidity", "--cut", "horizon", "--out", dir.to_str().unwrap()], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["conclusion"], "certified-schwarzschild");
    let m = v["result"]["fitted_mass"].as_f64().unwrap();
    assert!((m - 1.0).abs() <= 1e-5);
    let written = std::fs::read(dir.join("rigidity.json")).unwrap();
    assert_eq!(written, out.stdout);
    let csv = std::fs::read_to_string(dir.join("profile.csv")).unwrap();
    assert!(csv.starts_with("s,psi,closed_form\n"));
    assert!(csv.lines().count() > 100);
}

#[test]
fn chains_pass_on_schwarzschild() {
    let cfg = config("chains", ISOTROPIC);
    for (chain, cut) in [("bh3", "horizon"), ("photon3", "r=3")] {
        let out = run(&["rigidity", "--chain", chain, "--cut", cut], &cfg);
        assert_eq!(out.status.code(), Some(0), "{chain}");
    }
}

#[test]
fn mass_and_classify_pass() {
    let cfg = config("mass", "[triple]\nfixture = \"schwarzschild-areal\"\nn = 4\nm = 1.0\ncut = \"r=3\"\n");
    for cmd in ["mass", "classify"] {
        let out = run(&[cmd], &cfg);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
    }
    let cfg = config("mass-flat", "[triple]\nfixture = \"flat\"\nn = 3\n");
    assert_eq!(run(&["mass"], &cfg).status.code(), Some(0));
}

#[test]
fn adversarial_fixtures_exit_one() {
    for fixture in ["adversarial-non-harmonic", "adversarial-boundary-lapse", "adversarial-photon-inequality"] {
        let cfg = config(fixture, &format!("[triple]\nfixture = \"{fixture}\"\n"));
        let out = run(&["rigidity"], &cfg);
        assert_eq!(out.status.code(), Some(1), "{fixture}");
        assert_eq!(json(&out)["status"], "hypothesis-violated");
    }
}

#[test]
fn config_errors_exit_two() {
    let cfg = config("bad-fixture", "[triple]\nfixture = \"kerr\"\n");
    assert_eq!(run(&["verify"], &cfg).status.code(), Some(2));
    let cfg = config("bad-key", "[triple]\nfixture = \"flat\"\n[output]\nformat = \"yaml\"\n");
    assert_eq!(run(&["verify"], &cfg).status.code(), Some(2));
    let cfg = config("areal-horizon", "[triple]\nfixture = \"schwarzschild-areal\"\ncut = \"horizon\"\n");
    assert_eq!(run(&["rigidity"], &cfg).status.code(), Some(2));
    let out = bin().args(["verify", "--config", "/nonexistent/run.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_variable_is_validated() {
    let cfg = config("threads", ISOTROPIC);
    let out = bin().env("STATICGEO_THREADS", "many").args(["classify", "--cut", "horizon", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().env("STATICGEO_THREADS", "2").args(["classify", "--cut", "horizon", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn json_config_is_accepted() {
    let dir = scratch("json-config");
    let path = dir.join("run.json");
    std::fs::write(&path, r#"{"triple": {"fixture": "rindler", "n": 3}}"#).unwrap();
    let out = run(&["verify"], &path);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let cfg = config("determinism", ISOTROPIC);
    let args = ["verify", "--seed", "7"];
    let a = run(&args, &cfg).stdout;
    let b = bin().env("STATICGEO_THREADS", "1").args(args).arg("--config").arg(&cfg).output().unwrap().stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("\"m\": 1.0000000000000000e0"));
}
