use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn entangle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entangle")).args(args).output().expect("binary runs")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(bytes)))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn ghz_file(dir: &Path) -> PathBuf {
    write(dir, "ghz.json", &format!(r#"{{"dims":[2,2,2],"amps":[[{S},0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[{S},0]]}}"#))
}

fn epr_file(dir: &Path) -> PathBuf {
    write(dir, "epr.json", &format!(r#"{{"dims":[2,2],"amps":[[{S},0],[0,0],[0,0],[{S},0]]}}"#))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn classify_ghz() {
    let dir = TempDir::new().unwrap();
    let out = entangle(&["classify", p(&ghz_file(dir.path()))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["slocc"], "GHZ");
    assert_eq!(v["rank"], 2);
    assert!((v["tangle"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    assert_eq!(v["meta"]["tool"], "entangle");
    assert_eq!(v["meta"]["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn epr_entropy_is_one_bit() {
    let dir = TempDir::new().unwrap();
    let out = entangle(&["measure", p(&epr_file(dir.path())), "--which", "entropy"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out.stdout)["entropy_bits"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn classical_bruteforce_tops_out_at_three_quarters() {
    let out = entangle(&["game", "ghz", "--classical-bruteforce"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["max_win"].as_f64(), Some(0.75));
    let q = json(&entangle(&["game", "ghz", "--quantum"]).stdout);
    assert!((q["win_probability"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();

    let usage = entangle(&["bogus"]);
    assert_eq!(usage.status.code(), Some(2));
    assert_eq!(json(&usage.stderr)["error"]["kind"], "usage");

    let bad = write(dir.path(), "bad.json", r#"{"dims":[2,2]"#);
    let input = entangle(&["classify", p(&bad)]);
    assert_eq!(input.status.code(), Some(3));
    assert_eq!(json(&input.stderr)["exit_code"], 3);
    let missing = entangle(&["classify", p(&dir.path().join("nope.json"))]);
    assert_eq!(missing.status.code(), Some(3));

    let analysis = entangle(&["measure", p(&ghz_file(dir.path())), "--which", "concurrence"]);
    assert_eq!(analysis.status.code(), Some(1));
    assert_eq!(json(&analysis.stderr)["error"]["kind"], "analysis");

    let help = entangle(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(!help.stdout.is_empty());
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let ramsey = ["--seed", "11", "protocol", "ramsey", "--n-ions", "3", "--scheme", "ghz", "--t", "1", "--total-time", "3000"];
    let a = entangle(&ramsey);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, entangle(&ramsey).stdout);

    let w = write(dir.path(), "w.json", &format!(r#"{{"dims":[2,2,2],"amps":[[0,0],[{t},0],[{t},0],[0,0],[{t},0],[0,0],[0,0],[0,0]]}}"#, t = 1.0 / 3f64.sqrt()));
    let geo = ["--seed", "4", "measure", p(&w), "--which", "geometric", "--restarts", "6"];
    let a = entangle(&geo);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, entangle(&geo).stdout);
}

#[test]
fn config_seed_yields_to_flag() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"seed":3,"tolerances":{"rank":1e-6}}"#);
    let base = ["protocol", "ramsey", "--n-ions", "2", "--scheme", "product", "--t", "1", "--total-time", "2000"];

    let mut args = vec!["--config", p(&cfg)];
    args.extend(base);
    let v = json(&entangle(&args).stdout);
    assert_eq!(v["meta"]["seed"], 3);
    assert_eq!(v["meta"]["tolerances"]["rank"].as_f64(), Some(1e-6));

    let mut args = vec!["--config", p(&cfg), "--seed", "9"];
    args.extend(base);
    assert_eq!(json(&entangle(&args).stdout)["meta"]["seed"], 9);

    let bad = write(dir.path(), "bad_cfg.json", r#"{"sed":3}"#);
    let mut args = vec!["--config", p(&bad)];
    args.extend(base);
    assert_eq!(entangle(&args).status.code(), Some(3));
}
