use std::fs;
use std::path::Path;
use std::process::Command;

use lftlab::cli::run;
use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn lftlab(args: &[&str]) -> Out {
    let mut argv = vec!["lftlab"];
    argv.extend_from_slice(args);
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(argv, &mut o, &mut e);
    Out { code, stdout: String::from_utf8(o).unwrap(), stderr: String::from_utf8(e).unwrap() }
}

fn json(out: &Out) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn fixtures(dir: &Path) {
    let out = lftlab(&["fixtures", "emit", "--plot-data", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn column(v: &Value, table: &str, col: &str) -> Vec<Value> {
    let t = &v["tables"][table];
    let idx = t["columns"].as_array().unwrap().iter().position(|c| c == col).unwrap();
    t["rows"].as_array().unwrap().iter().map(|r| r[idx].clone()).collect()
}

fn strs(v: &[&str]) -> Vec<Value> {
    v.iter().map(|s| Value::from(*s)).collect()
}

#[test]
fn fixture_files_regenerate_identically() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    fixtures(a.path());
    fixtures(b.path());
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 18);
    for name in names {
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap());
    }
}

#[test]
fn plot_data_rows() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let ex1 = fs::read_to_string(dir.path().join("ex1_regular.csv")).unwrap();
    assert!(ex1.lines().any(|l| l == "0/1,-3/8,-23/64"), "{ex1}");
    let ex2 = fs::read_to_string(dir.path().join("ex2_regular.csv")).unwrap();
    for s in ["0/1", "3/4"] {
        let row: Vec<&str> = ex2.lines().find(|l| l.starts_with(&format!("{s},"))).unwrap().split(',').collect();
        assert_eq!(row[1], row[2]);
    }
    let ex3 = fs::read_to_string(dir.path().join("ex3_adaptive-right.csv")).unwrap();
    let s: Vec<&str> = ex3.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(s, ["0/1", "1/2", "1/2", "1/1", "1/1"]);
}

#[test]
fn lft_examples() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let v = json(&lftlab(&["lft", &path(dir.path(), "ex1.json"), "--dual", "regular:4", "--brute"]));
    assert_eq!(column(&v, "conjugate", "fstar"), strs(&["-1/2", "-3/8", "-1/8", "1/4"]));
    assert_eq!(v["diagnostics"]["brute_check"], "MATCH");
    let v = json(&lftlab(&["lft", &path(dir.path(), "ex2.json"), "--dual", "adaptive:centered"]));
    assert_eq!(column(&v, "conjugate", "fstar"), strs(&["0/1", "1/32", "1/8", "9/32", "3/8"]));

    let constant = dir.path().join("constant.json");
    fs::write(&constant, r#"{"kind":"samples","axes":[{"x0":"0","gamma_x":"1/2","n":4}],"samples":["5/3","5/3","5/3","5/3"]}"#).unwrap();
    let v = json(&lftlab(&["lft", constant.to_str().unwrap(), "--dual", "regular:2"]));
    assert_eq!(column(&v, "conjugate", "fstar"), strs(&["-5/3", "-5/3"]));
}

#[test]
fn explicit_duals_and_formats() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let ex1 = path(dir.path(), "ex1.json");
    let out = lftlab(&["lft", &ex1, "--dual", "-2,0,3", "--format", "csv", "--precision", "4"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let fstar: Vec<&str> = out.stdout.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(fstar, ["-0.5000", "-0.3750", "2.2500"]);
    let file = dir.path().join("r.json");
    let out = lftlab(&["lft", &ex1, "--out", file.to_str().unwrap()]);
    assert!(out.code == 0 && out.stdout.is_empty());
    assert!(fs::read_to_string(file).unwrap().contains("\"command\": \"lft\""));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let nonconvex = dir.path().join("nc.json");
    fs::write(&nonconvex, r#"{"kind":"samples","axes":[{"x0":"0","gamma_x":"1","n":3}],"samples":["0","1","0"]}"#).unwrap();
    assert_eq!(lftlab(&["lft", nonconvex.to_str().unwrap()]).code, 2);
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"kind\": ").unwrap();
    let out = lftlab(&["lft", broken.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("malformed"));
    assert_eq!(lftlab(&["lft", "/nonexistent/instance.json"]).code, 1);
    assert_eq!(lftlab(&["lft", broken.to_str().unwrap(), "--dual", "adaptive:sideways"]).code, 1);
    assert_eq!(lftlab(&["lft"]).code, 1);
    assert_eq!(lftlab(&["frobnicate"]).code, 1);
    assert_eq!(lftlab(&["--help"]).code, 0);
    assert_eq!(lftlab(&["hardness", "point-queries", "--d", "17", "--z", "10101010101010101"]).code, 2);
    assert_eq!(lftlab(&["hardness", "point-queries", "--d", "3", "--z", "10"]).code, 1);
    fixtures(dir.path());
    assert_eq!(lftlab(&["qlft", &path(dir.path(), "ex3.json")]).code, 2);
}

#[test]
fn qlft_example_three_acceptance() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let v = json(&lftlab(&["qlft", &path(dir.path(), "ex3.json"), "--embed", "--trials", "10000", "--seed", "1"]));
    assert_eq!(v["diagnostics"]["success_probability"], "1/2");
    assert_eq!(v["diagnostics"]["k_over_nw"], "1/2");
    assert_eq!(v["diagnostics"]["verification"], "MATCH");
    let total = v["diagnostics"]["total_attempts"].as_u64().unwrap() as f64;
    assert!((10000.0 / total - 0.5).abs() <= 0.015, "{}", 10000.0 / total);
}

#[test]
fn qlft_adaptive_never_retries() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    for ex in ["ex1.json", "ex2.json", "ex3.json"] {
        let v = json(&lftlab(&["qlft", &path(dir.path(), ex), "--embed", "--mode", "adaptive", "--trials", "50"]));
        assert_eq!(v["diagnostics"]["mean_attempts"], "1/1");
        assert_eq!(v["diagnostics"]["verification"], "MATCH");
    }
}

#[test]
fn qlft_two_dimensional_separable_matches() {
    let dir = tempfile::tempdir().unwrap();
    let sep = dir.path().join("sep.json");
    fs::write(&sep, r#"{"kind":"builtin","name":"separable-sum","params":{"d":2,"n":4}}"#).unwrap();
    let v = json(&lftlab(&["qlft", sep.to_str().unwrap(), "--dual-size", "4", "--seed", "3", "--omega"]));
    assert_eq!(v["diagnostics"]["verification"], "MATCH");
    assert_eq!(v["tables"]["conjugate"]["rows"].as_array().unwrap().len(), 16);
    assert!(v["diagnostics"]["omega"].is_string());
}

#[test]
fn identical_seeds_identical_documents() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let trace_a = dir.path().join("a.jsonl");
    let trace_b = dir.path().join("b.jsonl");
    let args = |t: &Path| {
        vec!["qlft".to_string(), path(dir.path(), "ex1.json"), "--embed".into(), "--trials".into(), "20".into(),
             "--seed".into(), "11".into(), "--trace".into(), t.to_str().unwrap().to_string()]
    };
    let a = lftlab(&args(&trace_a).iter().map(String::as_str).collect::<Vec<_>>());
    let b = lftlab(&args(&trace_b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read(&trace_a).unwrap(), fs::read(&trace_b).unwrap());
    assert_eq!(fs::read_to_string(&trace_a).unwrap().lines().count(), 5);
}

#[test]
fn hardness_commands() {
    let v = json(&lftlab(&["hardness", "point-queries", "--d", "3", "--z", "101"]));
    assert_eq!(v["diagnostics"]["recovered"], "101");
    assert_eq!(v["diagnostics"]["queries"], 24);

    let out = lftlab(&["hardness", "sampling", "--d", "4", "--t", "6", "--seed", "7"]);
    let v = json(&out);
    assert!(v["diagnostics"]["success"].is_boolean());
    assert_eq!(v["tables"]["equations"]["rows"].as_array().unwrap().len(), 10);
    assert_eq!(out.stdout, lftlab(&["hardness", "sampling", "--d", "4", "--t", "6", "--seed", "7"]).stdout);

    let v = json(&lftlab(&["hardness", "sampling", "--d", "5", "--z", "10110", "--t", "6", "--trials", "40"]));
    let rate: Vec<&str> = v["diagnostics"]["success_rate"].as_str().unwrap().split('/').collect();
    assert!(rate[0].parse::<f64>().unwrap() / rate[1].parse::<f64>().unwrap() >= 0.9);

    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let out = lftlab(&["hardness", "rescale", &path(dir.path(), "ex3.json")]);
    assert!(out.stderr.contains("W=2 W~=2 mapping=exact"), "{}", out.stderr);
    assert_eq!(json(&out)["summary"], "W=2 W~=2 mapping=exact");
}

#[test]
fn binary_reads_seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let exe = env!("CARGO_BIN_EXE_lftlab");
    let out = Command::new(exe)
        .args(["qlft", &path(dir.path(), "ex1.json"), "--embed"])
        .env("LFTLAB_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["diagnostics"]["rng_seed"], 42);
    let out = Command::new(exe).args(["lft", "/nonexistent.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
