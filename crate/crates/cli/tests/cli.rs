use std::process::{Command, Output};

use serde_json::Value;

fn dphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dphase")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = dphase(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn num(v: &Value) -> f64 {
    v.as_str().expect("string value").parse().expect("number")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn oracle_two_vertices() {
    // acyclic unless both arcs of the pair are present
    let p = 0.5;
    let v = json(&["prob", "--family", "acyclic", "--model", "d2", "--n", "2", "--p", "0.5", "--method", "oracle"]);
    assert_eq!(v["exact"], "3/4");
    assert!((num(&v["value"]) - (1.0 - p * p)).abs() < 1e-12);
    assert_eq!(v["method"], "oracle");
}

#[test]
fn exact_matches_oracle_on_small_graphs() {
    for fam in ["acyclic", "elementary", "bicyclic"] {
        for model in ["d2", "sd"] {
            let base = ["prob", "--family", fam, "--model", model, "--n", "4", "--p", "1/3"];
            let a = json(&[&base[..], &["--method", "exact"]].concat());
            let b = json(&[&base[..], &["--method", "oracle"]].concat());
            assert_eq!(a["value"], b["value"], "{fam} {model}");
        }
    }
}

#[test]
fn published_probabilities() {
    let v = json(&["prob", "--family", "acyclic", "--model", "md", "--n", "100", "--mu", "0"]);
    assert!(v["rescaled_value"].as_str().unwrap().starts_with("0.46304"));
    let v = json(&["prob", "--family", "elementary", "--model", "sd", "--n", "100", "--p", "0.01"]);
    assert!(v["value"].as_str().unwrap().starts_with("0.777319"));
    assert_eq!(v["warnings"], Value::Array(vec![]));
}

#[test]
fn strong_count_is_a_fraction() {
    let out = dphase(&["strong", "--r", "3", "--format", "text"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().next(), Some("275/12"));
    let v = json(&["strong", "--r", "2", "--variant", "simple"]);
    assert_eq!(v["value"], "17/8");
    assert!(v["degree"].as_u64().unwrap() <= v["degree_bound"].as_u64().unwrap());
}

#[test]
fn simple_deformed_exponential_root() {
    let v = json(&["roots", "--w", "1", "--kind", "simple"]);
    assert!((num(&v["value"]) - 1.488079).abs() < 1e-5);
}

#[test]
fn airy_at_derivative_zero() {
    let v = json(&["airy", "--k", "-2", "--z", "a1prime"]);
    // printed as 0.82428 81878: leading group rounded to five digits
    let x = num(&v["value"]);
    assert!((x - 0.82428).abs() < 5e-6, "{x}");
    // Ai(0; z) is Ai itself
    let v = json(&["airy", "--k", "0", "--z", "0"]);
    assert!((num(&v["value"]) - 0.355_028_053_887_817).abs() < 1e-8);
}

#[test]
fn integral_identities() {
    for kind in ["identity", "knessl"] {
        let v = json(&["integral", "--kind", kind]);
        assert_eq!(v["value"], "1.0000000", "{kind}");
    }
    let a = json(&["integral", "--kind", "residue-acyclic", "--mu", "2"]);
    let b = json(&["integral", "--kind", "varphi", "--mu", "2"]);
    assert!((num(&a["value"]) - num(&b["value"])).abs() < 1e-6);
}

#[test]
fn airy_table_cell() {
    let out = dphase(&["table", "--id", "airy_I"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("# dphase-table v1"));
    let rows = csv_rows(&out);
    let mu0 = rows[0].iter().position(|c| c == "mu=0").unwrap();
    let row2 = rows.iter().find(|r| r[0] == "2").unwrap();
    assert_eq!(row2[mu0], "1.0000000000");
}

#[test]
fn window_tables() {
    let out = dphase(&["table", "--id", "bicyclic", "--ns", "100"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    let printed = ["0.00213", "0.01360", "0.05777", "0.13535", "0.14434", "0.06652", "0.01378"];
    assert_eq!(rows[1][1..], printed.map(String::from));
    let limit = rows.iter().find(|r| r[0] == "inf").unwrap();
    assert_eq!(limit[4], "0.12500");

    let out = dphase(&["table", "--id", "mdag", "--ns", "1000"]);
    let rows = csv_rows(&out);
    let mu1 = rows[0].iter().position(|c| c == "mu=1").unwrap();
    assert_eq!(rows[1][mu1], "0.10793");
}

#[test]
fn convergence_above_one() {
    let out = dphase(&["convergence", "--lambda", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let slope: f64 = text.lines().find_map(|l| l.strip_prefix("# slope=")).unwrap().parse().unwrap();
    assert!((-0.5..=-0.2).contains(&slope), "{slope}");
    let rows = csv_rows(&out);
    let logs: Vec<f64> = rows[1..].iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(logs.windows(2).all(|w| w[1] < w[0]), "{logs:?}");
    // exact below the asymptotic value at every n
    for r in &rows[1..] {
        let (e, a): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        assert!(e < a);
    }
}

#[test]
fn census_counts_dags() {
    // labelled DAGs on three vertices
    let out = dphase(&["oracle", "--n", "3", "--model", "d2"]);
    assert!(out.status.success());
    let total: u64 = csv_rows(&out)[1..].iter().filter(|r| r[2] == "acyclic").map(|r| r[3].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 25);
}

#[test]
fn usage_errors_exit_one() {
    let out = dphase(&["prob", "--family", "cyclic", "--model", "md", "--n", "5", "--p", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "usage");

    let out = dphase(&["prob", "--family", "acyclic", "--model", "md", "--n", "5", "--p", "0.1", "--method", "oracle"]);
    assert_eq!(out.status.code(), Some(1));

    let out = dphase(&["prob", "--family", "acyclic", "--model", "md", "--n", "5"]);
    assert_eq!(out.status.code(), Some(1));

    let out = dphase(&["--precision", "32", "strong", "--r", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn warnings_exit_two_and_keep_the_value() {
    // critical formula far outside the window
    let out = dphase(&[
        "prob", "--family", "acyclic", "--model", "md", "--n", "1000", "--mu", "3", "--method", "asym", "--regime", "critical",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!v["warnings"].as_array().unwrap().is_empty());
    assert!(num(&v["value"]) > 0.0);
}

#[test]
fn doubled_precision_reproduces_digits() {
    let args = ["prob", "--family", "bicyclic", "--model", "d2", "--n", "2000", "--lambda", "0.5", "--method", "asym"];
    let a = json(&args);
    let b = json(&[&["--precision", "384"][..], &args[..]].concat());
    assert_eq!(a["value"], b["value"]);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_dphase"))
        .args(["airy", "--k", "1", "--z", "a1"])
        .env("DPHASE_PRECISION", "100")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["working_prec"], 200);
}
