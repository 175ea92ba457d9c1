use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

const UNIT: &str = r#"{"type":"intervals","endpoints":[-1,1]}"#;
const TWO: &str = r#"{"type":"intervals","endpoints":[-1,-0.3,0.2,1]}"#;

fn eqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqm"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn factor<'a>(report: &'a Value, kind: &str) -> Vec<&'a Value> {
    report["factors"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["kind"] == kind)
        .collect()
}

#[test]
fn eqdensity_csv_matches_arcsine_density_and_round_trips() {
    let out = eqm(&["eqdensity", "--set", UNIT, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,omega"));
    let mut rows = 0;
    for line in lines {
        let (t, w) = line.split_once(',').unwrap();
        let (t, w): (f64, f64) = (t.parse().unwrap(), w.parse().unwrap());
        assert_eq!(w.to_string().parse::<f64>().unwrap(), w);
        let exact = 1.0 / (PI * (1.0 - t * t).sqrt());
        assert!((w - exact).abs() < 1e-12 * exact);
        rows += 1;
    }
    assert_eq!(rows, 512);
}

#[test]
fn eqdensity_two_bands_reports_gap_zero_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("two.csv");
    let out = eqm(&[
        "eqdensity",
        "--set",
        TWO,
        "--grid",
        "8",
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let meta: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("two.csv.meta.json")).unwrap(),
    )
    .unwrap();
    let xi = meta["xi"].as_array().unwrap();
    assert_eq!(xi.len(), 1);
    let x = xi[0].as_f64().unwrap();
    assert!(-0.3 < x && x < 0.2);
    assert!(meta["frostman_spread"].as_f64().unwrap() < 1e-6);
    assert_eq!(
        std::fs::read_to_string(out_path).unwrap().lines().count(),
        17
    );
}

#[test]
fn eqdensity_on_two_arcs_uses_collocation() {
    let report = json(&eqm(&[
        "eqdensity",
        "--set",
        r#"{"type":"arcs","angles":[-2.5,-0.4,0.3,2.0]}"#,
        "--grid",
        "4",
    ]));
    assert_eq!(report["method"], "collocation");
    assert_eq!(report["samples"].as_array().unwrap().len(), 8);
    assert!((report["mass"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn factors_reports() {
    let r = json(&eqm(&["factors", "--set", UNIT]));
    let local = factor(&r, "markov-local");
    assert_eq!(local.len(), 2);
    for f in local {
        assert!((f["value"].as_f64().unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(f["degree_power"], 2);
        assert!(f["asymptotic"].is_boolean());
    }

    let r = json(&eqm(&["factors", "--beta", "2", "--point", "0"]));
    let v = factor(&r, "videnskii-pointwise")[0]["value"]
        .as_f64()
        .unwrap();
    assert!((v - 1.0 / 1f64.sin()).abs() < 1e-12);

    let r = json(&eqm(&[
        "factors",
        "--set",
        UNIT,
        "--alpha",
        "0",
        "--beta-exp",
        "0",
    ]));
    let v = factor(&r, "l2-markov")[0]["value"].as_f64().unwrap();
    assert!((v - 1.0 / PI).abs() < 1e-12);
}

#[test]
fn extremal_values_and_sweep() {
    let r = json(&eqm(&["extremal", "--set", UNIT, "--n", "8"]));
    assert!((r["result"]["value"].as_f64().unwrap() - 64.0).abs() < 0.05);

    let r = json(&eqm(&[
        "extremal", "--set", UNIT, "--n", "11", "--point", "0",
    ]));
    assert!((r["result"]["value"].as_f64().unwrap() - 11.0).abs() < 1e-3);
    assert!(r["result"]["refinements"].is_u64());

    let r = json(&eqm(&["extremal", "--set", TWO, "--sweep", "8:24:8"]));
    assert_eq!(r["rows"].as_array().unwrap().len(), 3);
    assert_eq!(r["nondecreasing"], true);
}

#[test]
fn l2_gradient_equality_case() {
    let out = eqm(&[
        "l2",
        "--set",
        UNIT,
        "--n",
        "7",
        "--alpha",
        "0.5",
        "--beta-exp",
        "-0.3",
        "--mode",
        "gradient-bernstein",
    ]);
    let r = json(&out);
    let row = &r["rows"][0];
    assert!((row["ratio"].as_f64().unwrap() - (7.0f64 * 8.2).sqrt()).abs() < 1e-8);
    assert!((row["relative"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn verify_exit_codes() {
    let out = eqm(&["verify", "--set", UNIT, "--trials", "100"]);
    let r = json(&out);
    assert_eq!(r["hard_violations"], 0);
    assert_eq!(r["seed"], 0);

    let out = eqm(&[
        "verify",
        "--inequality",
        "bernstein-alg",
        "--trials",
        "40",
        "--corrupt-density",
        "0.2",
    ]);
    assert_eq!(out.status.code(), Some(5));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("bernstein-alg") && stderr.contains("witness coefficients"),
        "{stderr}"
    );

    let r = json(&eqm(&[
        "verify",
        "--set",
        r#"{"type":"circle","r":1}"#,
        "--trials",
        "20",
    ]));
    for report in r["reports"].as_array().unwrap() {
        let w = report["witness"]["ratio"].as_f64().unwrap();
        assert!((w - 1.0).abs() < 1e-12);
    }
}

#[test]
fn same_seed_gives_byte_identical_output() {
    let args = ["verify", "--set", TWO, "--trials", "50", "--seed", "9"];
    let a = eqm(&args);
    let b = eqm(&args);
    assert_eq!(a.stdout, b.stdout);
    let single = Command::new(env!("CARGO_BIN_EXE_eqm"))
        .args(args)
        .env("EQM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, single.stdout);
}

#[test]
fn bad_input_and_numeric_failure_exit_codes() {
    assert_eq!(
        eqm(&[
            "eqdensity",
            "--set",
            r#"{"type":"intervals","endpoints":[1,-1]}"#
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        eqm(&["eqdensity", "--set", "/no/such/file.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(eqm(&["extremal", "--set", UNIT]).status.code(), Some(2));
    assert_eq!(
        eqm(&["factors", "--set", UNIT, "--k", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        eqm(&["verify", "--inequality", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(eqm(&["frobnicate"]).status.code(), Some(2));
    // Gram matrices of the two-interval set are too ill-conditioned at this degree
    let out = eqm(&["l2", "--set", TWO, "--n", "64", "--mode", "omega-bernstein"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        format!(r#"{{"set": {TWO}, "n": 8, "format": "csv"}}"#),
    )
    .unwrap();
    let out = eqm(&[
        "extremal",
        "--config",
        config.to_str().unwrap(),
        "--set",
        UNIT,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "8");
    assert!((row[1].parse::<f64>().unwrap() - 64.0).abs() < 0.05);

    std::fs::write(&config, r#"{"unknown": 1}"#).unwrap();
    assert_eq!(
        eqm(&["factors", "--config", config.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
