use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lpbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpbm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn csv_rows(p: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(p)
        .unwrap()
        .records()
        .map(Result::unwrap)
        .collect()
}

#[test]
fn vk_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = lpbm(&[
        "vk",
        "--n",
        "3",
        "--k",
        "2",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = read_json(&json)["result"]["volumes"][0]["value"]
        .as_f64()
        .unwrap();
    assert!((v - 2.0 * std::f64::consts::PI).abs() < 1e-12);

    let o = lpbm(&[
        "vk",
        "--body",
        r#"{"type":"box","a":[1,1,1,1]}"#,
        "--k",
        "2",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        read_json(&json)["result"]["volumes"][0]["value"].as_f64(),
        Some(24.0)
    );

    let o = lpbm(&[
        "vk",
        "--body",
        r#"{"type":"embedded-cube","dimension":6,"axes":[1,3,5]}"#,
        "--k",
        "3",
    ]);
    assert!(
        stdout(&o).contains("V_3 = 8.000000000000"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn vk_all_orders_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("vk.csv");
    let o = lpbm(&["vk", "--n", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 4);
    let v4: f64 = rows[3][1].parse().unwrap();
    assert!((v4 - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-12);
}

#[test]
fn vk_quadrature_on_perturbed_ball_reports_grid() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let body = r#"{"type":"log-perturbed-ball","s":0.0,"psi":{"polynomial":{"dimension":3,"monomials":[{"coeff":1.0,"powers":[2,0,0]}]},"amplitude":0.1}}"#;
    let o = lpbm(&[
        "vk",
        "--body",
        body,
        "--k",
        "3",
        "--grid-res",
        "12",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&json);
    assert_eq!(r["result"]["volumes"][0]["method"], "quadrature");
    assert_eq!(r["grid"]["resolution"], 12);
    assert_eq!(r["grid"]["fingerprint"].as_str().unwrap().len(), 64);
    // s = 0 is the unit ball.
    let v = r["result"]["volumes"][0]["value"].as_f64().unwrap();
    assert!((v - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-10);
}

#[test]
fn thresholds_table_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = lpbm(&[
        "thresholds",
        "--n-min",
        "3",
        "--n-max",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 6);
    let find = |n: &str, k: &str| {
        rows.iter()
            .find(|r| &r[0] == n && &r[1] == k)
            .unwrap()
            .clone()
    };
    for (n, k, p, branch) in [
        ("3", "2", 0.63093, "middle"),
        ("4", "2", 0.77371, "low"),
        ("5", "4", 0.63093, "high"),
    ] {
        let r = find(n, k);
        assert!((r[2].parse::<f64>().unwrap() - p).abs() < 5e-6);
        assert_eq!(&r[3], branch);
    }
}

#[test]
fn counterexample_exit_contract() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = lpbm(&[
        "counterexample",
        "--n",
        "4",
        "--k",
        "2",
        "--p",
        "0.5",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let r = read_json(&json);
    assert_eq!(r["result"]["verdict"]["conclusion"], "inequality-fails");
    assert!((r["result"]["vk_margin"].as_f64().unwrap() - 2.5).abs() < 1e-12);

    // Above the threshold nothing is certified, and that is not an error.
    let o = lpbm(&[
        "counterexample",
        "--n",
        "4",
        "--k",
        "2",
        "--p",
        "0.9",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        read_json(&json)["result"]["verdict"]["conclusion"],
        "inconclusive"
    );

    // Just below the threshold for k = n − 1 the enclosing box is too loose.
    let o = lpbm(&["counterexample", "--n", "6", "--k", "5", "--p", "0.62"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("inconclusive"));
}

#[test]
fn counterexample_sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = lpbm(&[
        "counterexample",
        "--sweep",
        "--n-max",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("n,k,branch,pbar,p,lhs_bound,rhs,margin,conclusion\n"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| &r[8] == "inequality-fails"));

    let o = lpbm(&[
        "counterexample",
        "--sweep",
        "--n",
        "6",
        "--fractions",
        "0.5,0.99",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("(6, 5"));
}

#[test]
fn concavity_verdicts_and_errors() {
    let o = lpbm(&["concavity", "--n", "3", "--k", "2", "--s-steps", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict: strictly-concave"));

    let o = lpbm(&[
        "concavity",
        "--n",
        "3",
        "--k",
        "3",
        "--psi",
        "const",
        "--amplitude",
        "0.4",
        "--s-steps",
        "5",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict: concave"));

    let o = lpbm(&["concavity", "--amplitude", "2"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("s = ") && err.contains("node"), "{err}");
}

#[test]
fn christoffel_scaled_ball() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = lpbm(&[
        "christoffel",
        "--n",
        "4",
        "--k",
        "2",
        "--p",
        "0.5",
        "--body",
        r#"{"type":"ball","radius":1.1}"#,
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let r = read_json(&json)["result"]["max_residual"].as_f64().unwrap();
    assert!((r - (1.1f64.powf(1.5) - 1.0) * 3.0).abs() < 1e-12);

    let o = lpbm(&[
        "christoffel",
        "--body",
        r#"{"type":"ball","radius":1.1}"#,
        "--p",
        "0.5",
        "--tol",
        "1e-3",
    ]);
    assert_eq!(code(&o), 1);
    let o = lpbm(&[
        "christoffel",
        "--n",
        "5",
        "--k",
        "4",
        "--p",
        "0.3",
        "--tol",
        "1e-8",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn poincare_and_ibp() {
    let o = lpbm(&["poincare", "--n", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("ratio = 1.0000"));
    let o = lpbm(&["poincare", "--psi", "const"]);
    assert_eq!(code(&o), 2);
    let o = lpbm(&["ibp-check", "--n", "4", "--k", "3", "--seed", "9"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn config_file_with_flag_override_and_echo() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let json = dir.path().join("r.json");
    std::fs::write(
        &cfg,
        r#"{"subcommand": "counterexample", "n": 4, "k": 2, "p": 0.9}"#,
    )
    .unwrap();
    let o = lpbm(&[
        "counterexample",
        "--config",
        cfg.to_str().unwrap(),
        "--p",
        "0.5",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let r = read_json(&json);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["config"]["p"], 0.5);
    assert_eq!(r["config"]["n"], 4);
    assert_eq!(r["result"]["verdict"]["conclusion"], "inequality-fails");
    assert!(r["library_version"].is_string());

    let o = lpbm(&["vk", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "config for another subcommand");
    std::fs::write(&cfg, r#"{"n": 4, "grid_res": 3}"#).unwrap();
    let o = lpbm(&["vk", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "unknown key");
    let o = lpbm(&["counterexample", "--n", "4", "--k", "2", "--p", "1.5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--p"));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let out = dir.path().join(format!("{tag}.csv"));
        let json = dir.path().join(format!("{tag}.json"));
        let o = lpbm(&[
            "concavity",
            "--n",
            "3",
            "--k",
            "3",
            "--grid-method",
            "monte-carlo",
            "--grid-res",
            "400",
            "--seed",
            "11",
            "--s-steps",
            "9",
            "--out",
            out.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        (std::fs::read(out).unwrap(), read_json(&json))
    };
    let (a, ja) = run("a");
    let (b, jb) = run("b");
    assert_eq!(a, b);
    assert_eq!(ja["result"], jb["result"]);
    assert_eq!(ja["grid"]["fingerprint"], jb["grid"]["fingerprint"]);

    // The echoed config replays the run.
    let replay = dir.path().join("replay.json");
    let mut echo = ja["config"].clone();
    let out = dir.path().join("c.csv");
    echo["out"] = Value::String(out.to_str().unwrap().into());
    echo.as_object_mut().unwrap().remove("json");
    std::fs::write(&replay, echo.to_string()).unwrap();
    let o = lpbm(&["concavity", "--config", replay.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(out).unwrap(), a);
}
