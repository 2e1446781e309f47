use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bachelier"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn price_reference_value() {
    let v = json(&["price", "--rate", "0.02"]);
    for key in ["command", "inputs", "results", "seed", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let price = v["results"]["value"].as_f64().unwrap();
    assert!((price - 7.96886).abs() < 2e-5, "{price}");
    assert_eq!(v["inputs"]["command"]["strike"], 100.0);
    assert_eq!(v["inputs"]["rn_mode"], "as-written");
}

#[test]
fn convergence_report_at_zero_rate() {
    let v = json(&["convergence-report"]);
    let modes = v["results"]["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 1);
    let errs: Vec<f64> = modes[0]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["abs_error"].as_f64().unwrap())
        .collect();
    assert_eq!(errs.len(), 4);
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn convergence_report_runs_both_modes_with_rate() {
    let v = json(&["convergence-report", "--rate", "0.02", "--depths", "64,256"]);
    assert_eq!(v["results"]["modes"].as_array().unwrap().len(), 2);
    let gap = v["results"]["gap"][1]["martingale_minus_as_written"].as_f64().unwrap();
    assert!((gap - 0.01).abs() < 1e-3, "{gap}");
    let out = run(&["convergence-report", "--rate", "0.02", "--depths", "64,256", "--table", "--out", "/dev/null"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("gap") && text.contains("closed form"), "{text}");
}

#[test]
fn figure_b3_satisfies_local_time_identity() {
    let out = run(&["simulate", "--figure", "B3", "--seed", "7", "--steps", "2000"]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["t", "brownian", "local_time", "z_111"]);
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let x: Vec<f64> = rec.iter().map(|s| s.parse().unwrap()).collect();
        assert!((x[3] - (x[1] + x[2])).abs() <= 1e-12, "{x:?}");
        rows += 1;
    }
    assert_eq!(rows, 2001);
}

#[test]
fn figure_families_and_transforms() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("b4.csv");
    let v = json(&["simulate", "--figure", "b4", "--steps", "100", "--csv", csv_path.to_str().unwrap()]);
    assert_eq!(v["results"]["columns"].as_array().unwrap().len(), 11);
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(text.lines().count(), 102);

    let out = run(&["simulate", "--figure", "A1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(last[0], 100.0);
    assert!((last[1] - 2_948.263_182).abs() < 1e-5);
}

#[test]
fn stochastic_commands_are_byte_identical() {
    let args = ["pathdep", "--paths", "500", "--steps", "50", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["pathdep", "--paths", "500", "--steps", "50", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);

    let sim = ["simulate", "--process", "gsbm", "--gamma", "2,-1,2", "--steps", "300"];
    let first = run(&sim);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, run(&sim).stdout);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"seed": 5, "steps": 64, "rn_mode": "martingale",
            "command": {"name": "tree", "rate": 0.02, "payoff": "digital"}}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let v = json(&["--config", cfg]);
    assert_eq!(v["command"], "tree");
    assert_eq!(v["seed"], 5);
    assert_eq!(v["inputs"]["steps"], 64);
    assert_eq!(v["inputs"]["rn_mode"], "martingale");
    assert_eq!(v["inputs"]["command"]["payoff"], "digital");
    assert_eq!(v["inputs"]["command"]["strike"], 100.0);

    let v = json(&["--config", cfg, "--steps", "32", "--rn-mode", "as-written"]);
    assert_eq!(v["inputs"]["steps"], 32);
    assert_eq!(v["inputs"]["rn_mode"], "as-written");

    let out_path = dir.path().join("result.json");
    let out = run(&["--config", cfg, "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["command"], "tree");
}

#[test]
fn errors_are_json_on_stderr() {
    let out = run(&["price", "--volatility", "-1"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "invalid_parameter");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "t,value\n0,1\n1,NaN\n").unwrap();
    let out = run(&["estimate", "--input", bad.to_str().unwrap()]);
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "row");
    assert_eq!(e["error"]["row"], 2);

    let out = run(&["estimate", "--input", "/nonexistent.csv"]);
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "config");

    let out = run(&["implied-affinity", "--company-score", "50"]);
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "unidentifiable");

    assert!(!run(&["tree", "--rn-mode", "sideways"]).status.success());
}

#[test]
fn estimate_and_esg_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let prices = dir.path().join("p.csv");
    let mut text = String::from("t,value\n");
    for i in 0..=60 {
        let jitter = if i % 2 == 0 { 0.3 } else { -0.3 };
        text += &format!("{},{}\n", i as f64 / 4.0, 10.0 + 0.1 * i as f64 + jitter);
    }
    std::fs::write(&prices, text).unwrap();
    let v = json(&["estimate", "--input", prices.to_str().unwrap()]);
    let est = &v["results"]["estimate"];
    assert!(est["volatility"].as_f64().unwrap() > 0.0);
    assert_eq!(est["changes"], 60);

    let records = dir.path().join("esg.csv");
    std::fs::write(
        &records,
        "date,price,company_score,benchmark_score\n2022-10-24,165.15,72.63,50.0\n2022-11-24,160.0,55,50\n",
    )
    .unwrap();
    let v = json(&["esg", "--input", records.to_str().unwrap(), "--gamma", "0.5"]);
    let recs = v["results"]["records"].as_array().unwrap();
    assert_eq!(recs.len(), 2);
    assert!((recs[1]["adjusted_price"].as_f64().unwrap() - 168.0).abs() < 1e-9);
    assert!((recs[1]["time"].as_f64().unwrap() - 31.0 / 365.0).abs() < 1e-15);
}

#[test]
fn pathdep_with_factor_data() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("factor.csv");
    let mut text = String::from("t,change\n");
    for i in 0..400 {
        let c = if i % 5 < 3 { 0.01 } else { -0.012 };
        text += &format!("{},{c}\n", i as f64 / 252.0);
    }
    std::fs::write(&path, text).unwrap();
    let v = json(&["pathdep", "--factor-csv", path.to_str().unwrap(), "--paths", "1000", "--steps", "20"]);
    let est = &v["results"]["factor_estimates"];
    assert!((est["sign_prob"].as_f64().unwrap() - 0.6).abs() < 1e-12);
    assert!(v["results"]["std_error"].as_f64().unwrap() > 0.0);
}

#[test]
fn other_commands_run() {
    let v = json(&["implied-rate"]);
    assert!((v["results"]["simple_rate"].as_f64().unwrap() - 0.02).abs() < 1e-12);
    let v = json(&["implied-affinity"]);
    assert!((v["results"]["gamma"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let v = json(&["tree", "--engine", "classical", "--drift", "0.1", "--volatility", "0.2", "--rate", "0.02", "--steps", "2"]);
    assert!(v["results"]["value"].as_f64().unwrap() > 0.0);
    for p in ["abm", "gbm", "absorbed", "ito-mckean", "ito-mckean-mixture", "hv-walk", "csyip"] {
        let out = run(&["simulate", "--process", p, "--steps", "50"]);
        assert!(out.status.success(), "{p}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 52, "{p}");
    }
}
