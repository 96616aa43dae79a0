use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use singular_heat::cli::{parse_config, Command as Cmd, SchemeChoice};
use singular_heat::InitialData;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_singular-heat"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("SINGULAR_HEAT_THREADS").output().unwrap()
}

fn stderr_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().last().unwrap()).unwrap_or_else(|_| panic!("stderr: {text}"))
}

#[test]
fn constants_prints_json() {
    let out = run(&["constants", "--q", "0.5", "--gamma", "0.3", "--dim", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["eta0", "eta1", "eta2", "beta", "lambda", "q", "gamma", "n_dim"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!((v["lambda"].as_f64().unwrap() - 1.4758).abs() < 1e-4);
}

#[test]
fn gamma_star_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gs.json");
    let out = run(&[
        "gamma-star",
        "--q",
        "0.5",
        "--dim",
        "1",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    assert!(v["crossed"].as_bool().unwrap());
    assert!((v["gamma_star"].as_f64().unwrap() - 0.194636).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_two_with_a_structured_line() {
    let out = run(&["constants", "--q", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stderr_json(&out);
    assert_eq!(v["error"], "usage");
    assert!(v["message"].as_str().unwrap().contains("q"));

    let out = run(&["solve", "--u0", "bump"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["constants", "--gamma", "1.0", "--dim", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    write(&cfg, r#"{"q": 0.3, "gamma": 0.5, "dim": 2}"#);
    let c = parse_config([
        "singular-heat",
        "--config",
        cfg.to_str().unwrap(),
        "constants",
        "--gamma",
        "0.4",
    ])
    .unwrap();
    assert_eq!(c.params.q, 0.3);
    assert_eq!(c.params.gamma, 0.4);
    assert_eq!(c.params.n_dim, 2);

    write(&cfg, r#"{"q": 0.3, "colour": "blue"}"#);
    let out = run(&["--config", cfg.to_str().unwrap(), "constants"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["message"].as_str().unwrap().contains("colour"));
}

#[test]
fn solve_writes_csv_and_sidecar_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let common = [
        "--q",
        "0.5",
        "--gamma",
        "0.3",
        "--points",
        "64",
        "--half-width",
        "8",
        "--output-times",
        "0.5,1",
    ];
    for path in [&a, &b] {
        let mut args = vec!["solve", "--u0", "bump", "--out", path.to_str().unwrap()];
        args.extend_from_slice(&common);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let csv = fs::read(&a).unwrap();
    assert_eq!(csv, fs::read(&b).unwrap());
    let text = String::from_utf8(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,node_index,coord_1,u"));
    // t = 0, 0.5 and 1
    assert_eq!(text.lines().count(), 1 + 3 * 64);
    let sidecar: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("a.csv.json")).unwrap()).unwrap();
    assert_eq!(sidecar["u0"], "bump");
    assert_eq!(sidecar["params"]["q"], 0.5);
    assert!(sidecar["scheme"]["n_schedule_used"].as_array().is_some());
}

#[test]
fn single_nonlinearity_solves() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("g.csv");
    let out = run(&[
        "solve",
        "--u0",
        "const:1",
        "--scheme",
        "power",
        "--gamma",
        "0",
        "--points",
        "32",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&out_path).unwrap();
    // interior nodes at t = 1; the edge feels the zero extension
    let peak = text
        .lines()
        .skip(1)
        .filter(|l| l.starts_with("1,"))
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!((peak - 2.25).abs() < 1e-3, "{peak}");
}

#[test]
fn solve_arguments_parse() {
    let c = parse_config([
        "singular-heat",
        "solve",
        "--u0",
        "gauss:2",
        "--scheme",
        "g:8",
        "--out",
        "x.csv",
    ])
    .unwrap();
    match c.command {
        Cmd::Solve { u0, scheme } => {
            assert_eq!(u0, InitialData::Gauss { a: 2.0 });
            assert!(matches!(scheme, SchemeChoice::Single(_)));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn sweep_covers_both_ends() {
    let out = run(&[
        "sweep", "--param", "q", "--from", "0.2", "--to", "0.8", "--steps", "4", "--gamma", "0.2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.len(), 4);
    assert_eq!(v[0]["q"].as_f64().unwrap(), 0.2);
    assert!((v[3]["q"].as_f64().unwrap() - 0.8).abs() < 1e-15);
}

#[test]
fn threads_from_the_environment() {
    let out = bin()
        .args(["constants"])
        .env("SINGULAR_HEAT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["constants"])
        .env("SINGULAR_HEAT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn quick_verify_reports_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["verify", "--suite", "quick", "--json", path.to_str().unwrap()]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    assert_eq!(reports.len(), stdout.lines().count());
    let all_pass = reports.iter().all(|r| r["pass"].as_bool().unwrap());
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 1 }));
    for (line, r) in stdout.lines().zip(&reports) {
        let word = if r["pass"].as_bool().unwrap() { "PASS" } else { "FAIL" };
        assert!(
            line.starts_with(&format!("{word} {}", r["name"].as_str().unwrap())),
            "{line}"
        );
    }
}
