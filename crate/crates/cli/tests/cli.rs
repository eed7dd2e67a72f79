use std::path::PathBuf;
use std::process::{Command, Output};

fn hardylab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardylab")).args(args).env_remove("HARDYLAB_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hardylab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn constant_line(o: &Output) -> f64 {
    stdout(o).lines().find_map(|l| l.strip_prefix("constant")).unwrap().trim().parse().unwrap()
}

#[test]
fn classical_constant() {
    let o = hardylab(&["constant", "--form", "classical-hardy", "-N", "5", "-p", "2", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(constant_line(&o), 2.25);
    assert!(stdout(&o).contains("admissible  yes"));
}

#[test]
fn improved_rellich_constant() {
    let o = hardylab(&["constant", "--form", "improved-rellich-b-p2", "--gamma", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((constant_line(&o) - 0.5625).abs() < 1e-14);
    assert!(stdout(&o).contains("[x] α ≥ 3"));
}

#[test]
fn inadmissible_input_exits_two() {
    let o = hardylab(&["constant", "--form", "improved-hardy", "-p", "2", "--beta", "2", "--gamma", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("γ > 0 required"), "{}", stderr(&o));
    assert!(stdout(&o).contains("[ ] γ > 0"));
    let o = hardylab(&["constant", "--form", "no-such-form"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn negative_parameters_parse() {
    let o = hardylab(&["constant", "--form", "improved-hardy-rellich-step", "--alpha", "-4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn identity_suite_passes_and_is_reproducible() {
    let (a, b) = (scratch("id-a.json"), scratch("id-b.json"));
    for path in [&a, &b] {
        let o = hardylab(&["verify", "identity", "--seed", "7", "-o", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["schema"], "hardylab/1");
    assert_eq!(v["seed"], 7);
    for case in v["cases"].as_array().unwrap() {
        if case["key"].as_str().unwrap().starts_with("identity/residual-") {
            assert!(case["metric"].as_f64().unwrap() < 1e-8);
        }
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_hardylab")).args(["verify", "recursion"]).env("HARDYLAB_SEED", "13").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 13);
}

#[test]
fn csv_reports() {
    let o = hardylab(&["verify", "limits", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("key,metric,relation,bound,pass,note"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn failing_case_exits_one_and_is_printed() {
    let o = hardylab(&["verify", "identity", "--profiles", "3", "--tol", "identity=1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("\"pass\":false"));
}

#[test]
fn unknown_tolerance_is_rejected() {
    let o = hardylab(&["verify", "identity", "--tol", "nonsense=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn el_sweep_prints_the_eigenvalue_column() {
    let o = hardylab(&["verify", "variational", "--form", "el", "--gamma", "1", "-N", "3", "-o", scratch("el.json").to_str().unwrap()]);
    let err = stderr(&o);
    let lambdas: Vec<f64> = err
        .lines()
        .skip_while(|l| !l.contains("lambda1"))
        .skip(1)
        .take_while(|l| !l.contains("extrapolated"))
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(lambdas.len(), 7);
    assert!(lambdas.windows(2).all(|w| w[1] < w[0]));
    assert!(lambdas.iter().all(|&l| l > 0.25));
    let extrapolated: f64 = err.lines().find_map(|l| l.trim().strip_prefix("extrapolated")).unwrap().trim().parse().unwrap();
    assert!((extrapolated / 0.25 - 1.0).abs() < 0.02);
    // the literal gap at ε = 10⁻³ is a known failure, reported rather than hidden
    assert_eq!(o.status.code(), Some(1));
    assert!(err.contains("gap-at-1e-3"));
    let o = hardylab(&["verify", "variational", "--form", "el", "--gamma", "2", "-N", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn boundary_sweep_gap_decreases() {
    let o = hardylab(&["sweep", "--form", "improved-hardy", "--alpha", "1", "--gamma", "2", "--param", "a", "--values", "0.6,0.55,0.51"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value,quotient,constant,gap,limit_ratio,limit_difference"));
    let gaps: Vec<f64> = lines.map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(gaps.len(), 3);
    assert!(gaps.windows(2).all(|w| w[1] < w[0]) && gaps[2] > 0.0);
}

#[test]
fn gamma_sweep_approaches_the_limit() {
    let o = hardylab(&["sweep", "--form", "improved-hardy", "--alpha", "1", "--param", "gamma", "--values", "1e-1,1e-2,1e-3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let d: Vec<f64> = rows.as_array().unwrap().iter().map(|r| r["limit_difference"].as_f64().unwrap()).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]) && d[2] < 1e-2);
}

#[test]
fn rellich_origin_sweep_gap_decreases() {
    let o = hardylab(&["sweep", "--form", "improved-rellich-rad", "--param", "b", "--values", "2.4 2.45 2.49", "--delta", "0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let gaps: Vec<f64> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn empty_grid_is_an_error() {
    let o = hardylab(&["sweep", "--form", "improved-hardy", "--param", "a", "--values", ""]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty sweep grid"));
}
