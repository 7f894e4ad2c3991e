use std::fs;
use std::process::{Command, Output};

fn fracsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracsum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn staircase_on_the_line() {
    let o = fracsum(&["staircase", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x,S\n0,0\n0.5,0.5\n1,1\n");
}

#[test]
fn cantor_staircase_halves_at_one_third() {
    let o = fracsum(&[
        "staircase",
        "--support",
        "cantor",
        "--from",
        "0",
        "--to",
        "1",
        "--samples",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let s: Vec<f64> = v["S"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    // grid 0, 1/3, 2/3, 1
    assert!((s[1] - s[3] / 2.0).abs() < 1e-11);
    assert!((s[2] - s[3] / 2.0).abs() < 1e-11);
}

#[test]
fn staircase_rejects_bad_range() {
    let o = fracsum(&["staircase", "--from", "2", "--to", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid range"));
}

#[test]
fn alpha_override_needs_the_line() {
    assert_eq!(fracsum(&["--alpha", "1", "staircase"]).status.code(), Some(0));
    assert_eq!(
        fracsum(&["--support", "cantor", "--alpha", "0.5", "staircase"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(fracsum(&["--alpha", "0.5", "staircase"]).status.code(), Some(2));
}

#[test]
fn transform_rules_print_expressions() {
    for (expr, want) in [("exp(-1)", "1/(1+s)"), ("const 1", "1"), ("ml(0.5,2)", "1/(1+2*s^0.5)")] {
        let o = fracsum(&["transform", expr]);
        assert_eq!(o.status.code(), Some(0), "{expr}");
        assert_eq!(stdout(&o).trim(), want);
    }
}

#[test]
fn numeric_transform_reports_deltas() {
    let o = fracsum(&[
        "transform",
        "exp(-1)",
        "--mode",
        "numeric",
        "--v",
        "0.25,0.5",
        "--support",
        "cantor",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(lines.next(), Some("v,s,rule,numeric,delta"));
    for line in lines {
        let delta: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(delta.abs() < 1e-8, "{line}");
    }
}

#[test]
fn transform_errors_are_invalid_input() {
    let syntax = fracsum(&["transform", "exp(-1"]);
    assert_eq!(syntax.status.code(), Some(2));
    assert!(stderr(&syntax).contains("byte"));
    let outside = fracsum(&["transform", "exp(2)", "--v", "1"]);
    assert_eq!(outside.status.code(), Some(2));
}

#[test]
fn operator_table() {
    let o = fracsum(&["operator", "pow(2)", "--op", "caputo", "--order", "0.5", "--x", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    // Γ(3)/Γ(2.5)
    assert!((value - 1.5045055561).abs() < 1e-3, "{text}");
    let missing = fracsum(&["operator", "pow(2)", "--op", "caputo", "--x", "1"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn classical_caputo_solution() {
    let o = fracsum(&[
        "solve", "caputo", "--beta", "1", "--lambda", "0.5", "--p0", "0", "--t-end", "1", "--steps", "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert_eq!(last, "1,3.10747935941,4");
}

#[test]
fn verify_adopted_form_succeeds() {
    let o = fracsum(&["solve", "caputo", "--verify", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("transform residual: 0"));
    assert!(stderr(&o).contains("max deviation"));
}

#[test]
fn verify_printed_form_fails() {
    let o = fracsum(&[
        "solve",
        "caputo",
        "--as-printed",
        "--lambda",
        "0.5",
        "--verify",
        "--steps",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(3));
    // the trajectory is still written
    assert!(stdout(&o).starts_with("t,p,equilibrium\n"));
}

#[test]
fn singular_wsk_exp_is_rejected() {
    let o = fracsum(&["solve", "wsk-exp", "--d2", "1", "--s2", "0.5", "--gamma", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("singular"));
}

#[test]
fn unknown_model_is_invalid() {
    assert_eq!(fracsum(&["solve", "walrasian"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("traj.json");
    fs::write(
        &cfg,
        r#"{"format": "json", "params": {"beta": 1.0, "lambda": 0.5, "p0": 0.0}, "t_end": 1.0, "steps": 2}"#,
    )
    .unwrap();
    let o = fracsum(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "solve",
        "caputo",
        "--lambda",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["params_echo"]["lambda"], 1.0);
    assert_eq!(v["params_echo"]["beta"], 1.0);
    let p_end = v["p"][2].as_f64().unwrap();
    assert!((p_end - 4.0 * (1.0 - (-3.0f64).exp())).abs() < 1e-10);
}

#[test]
fn malformed_config_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"suport": "line"}"#).unwrap();
    assert_eq!(
        fracsum(&["--config", cfg.to_str().unwrap(), "staircase"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "solve",
        "wsk",
        "--support",
        "cantor",
        "--format",
        "json",
        "--steps",
        "25",
    ];
    assert_eq!(fracsum(&args).stdout, fracsum(&args).stdout);
}

#[test]
fn verify_suite_passes() {
    let o = fracsum(&["verify-suite"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
}
