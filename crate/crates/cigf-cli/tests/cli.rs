//! End-to-end tests of the command-line interface, including the full
//! verification run and the documented exit codes.

use std::process::{Command, Output};
use std::time::Instant;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cigf"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn measure_emits_json_with_value_error_and_method() {
    let out = run(&[
        "measure",
        "--dist",
        "exp:1",
        "--measure",
        "cigf",
        "--alpha",
        "1",
        "--beta",
        "1",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!(v["err_est"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["method"], "closed-form");
    assert!(v["meta"].is_string());
}

#[test]
fn measure_routes_and_names() {
    for (extra, expect) in [
        (vec!["--measure", "cre"], 1.0),
        (vec!["--measure", "cre", "--via", "cigf"], 1.0),
        (vec!["--measure", "cre_n", "--n", "2"], 1.0),
        (vec!["--measure", "cre_frac", "--nu", "0.5"], 1.0),
        (vec!["--measure", "k", "--beta", "2"], 0.5),
    ] {
        let mut args = vec!["measure", "--dist", "exp:1"];
        args.extend(extra.iter());
        let out = run(&args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        let got = v["value"].as_f64().unwrap();
        assert!(
            (got - expect).abs() <= 1e-3 * (1.0 + expect),
            "{args:?}: {got} vs {expect}"
        );
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "measure",
        "--dist",
        "erlang2:1",
        "--measure",
        "cigf",
        "--alpha",
        "1",
        "--beta",
        "0.5",
    ];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
}

#[test]
fn parse_errors_exit_2() {
    // unknown subcommand flag (handled by the argument parser)
    let out = run(&["measure", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed distribution spec
    let out = run(&["measure", "--dist", "weibull:2", "--measure", "cre"]);
    assert_eq!(out.status.code(), Some(2));
    // missing required exponent
    let out = run(&[
        "measure",
        "--dist",
        "exp:1",
        "--measure",
        "cigf",
        "--alpha",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_3() {
    // (0.5, -0.5) lies outside the finiteness domain of the exponential law
    let out = run(&[
        "measure",
        "--dist",
        "exp:1",
        "--measure",
        "cigf",
        "--alpha",
        "0.5",
        "--beta",
        "-0.5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("domain"), "stderr: {err}");

    // invalid distribution parameter
    let out = run(&["measure", "--dist", "exp:-1", "--measure", "cre"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn accuracy_errors_exit_4() {
    // an unreachable tolerance forces an accuracy failure
    let dir = std::env::temp_dir().join("cigf_cli_tight.conf");
    std::fs::write(&dir, "abs_tol = 1e-300\nrel_tol = 1e-300\nmax_subdiv = 4\n").unwrap();
    let out = run(&[
        "--config",
        dir.to_str().unwrap(),
        "measure",
        "--dist",
        "erlang2:1",
        "--measure",
        "cigf",
        "--alpha",
        "1",
        "--beta",
        "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(4),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::remove_file(&dir).ok();
}

#[test]
fn config_presets_and_flag_override() {
    let path = std::env::temp_dir().join("cigf_cli_mc.conf");
    std::fs::write(&path, "trials = 1000\nseed = 5\n# comment\nstreams = 2\n").unwrap();
    let base = [
        "--config",
        path.to_str().unwrap(),
        "reliability",
        "--dist",
        "unif:0:1",
        "--n",
        "2",
        "--k-range",
        "1:1",
        "--method",
        "mc",
        "--out",
        "json",
    ];
    let a = stdout(&run(&base));
    let b = stdout(&run(&base));
    assert_eq!(a, b, "config-seeded Monte Carlo must be reproducible");
    // a flag overrides the file seed and changes the estimate stream
    let mut with_flag = base.to_vec();
    with_flag.extend(["--seed", "6"]);
    let c = stdout(&run(&with_flag));
    assert_ne!(a, c);

    std::fs::remove_file(&path).ok();
}

#[test]
fn reliability_closed_profile_is_linear() {
    let out = run(&[
        "reliability",
        "--dist",
        "power:1",
        "--n",
        "100",
        "--k-range",
        "0:100",
        "--method",
        "closed",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "k,value,err_est,method");
    for (k, line) in lines.enumerate() {
        let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        let expect = 1.0 - k as f64 / 101.0;
        assert!(
            (value - expect).abs() <= 1e-12,
            "k = {k}: {value} vs {expect}"
        );
    }
}

#[test]
fn bounds_subcommand_reports() {
    let out = run(&["bounds", "--dist", "unif:0:1", "--out", "text"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().count() > 10);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));

    let out = run(&["bounds", "--dist", "exp:1", "--out", "json"]);
    assert!(out.status.success());
    for line in stdout(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true, "{line}");
    }
}

#[test]
fn gini_subcommand_values() {
    let out = run(&["gini", "--dist", "exp:1", "--distortion", "id"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-8);

    // power distortions reproduce the generating function
    let out = run(&["gini", "--dist", "bern:0.3", "--distortion", "pow:2:1"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.147).abs() < 1e-9);

    // weighted variant with a degenerate mixing point
    let out = run(&[
        "gini",
        "--dist",
        "unif:0:1",
        "--distortion",
        "id",
        "--weight",
        "degen:0.5",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn bivariate_subcommand_grid() {
    let out = run(&["bivariate", "--example", "triangle", "--grid", "1,2"]);
    assert!(out.status.success());
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    let first = &lines[0];
    assert!((first["value"].as_f64().unwrap() - 1.0 / 180.0).abs() < 1e-10);

    let out = run(&[
        "bivariate",
        "--example",
        "product:exp:1,unif:0:1",
        "--alpha",
        "1",
        "--beta",
        "1",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.0 / 12.0).abs() < 1e-6);
}

#[test]
fn criterion_10_full_verification_run() {
    let started = Instant::now();
    let out = run(&["verify", "--suite", "all"]);
    let elapsed = started.elapsed();
    assert!(
        out.status.success(),
        "verification failed:\n{}",
        stdout(&out)
            .lines()
            .filter(|l| l.starts_with("FAIL"))
            .collect::<Vec<_>>()
            .join("\n")
    );
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() > 200);
    assert!(!text.lines().any(|l| l.starts_with("FAIL")));
    assert!(
        elapsed.as_secs() < 300,
        "verification took {elapsed:?}, the budget is five minutes"
    );
    println!(
        "criterion 10 (full verification run, {} checks in {elapsed:?}): PASS",
        text.lines().filter(|l| l.starts_with("PASS")).count()
    );
}

#[test]
fn config_via_environment_variable() {
    let path = std::env::temp_dir().join("cigf_cli_env.conf");
    std::fs::write(&path, "trials = 2000\nseed = 9\n").unwrap();
    let run_env = |env_val: Option<&str>| {
        let mut cmd = bin();
        cmd.args([
            "reliability",
            "--dist",
            "unif:0:1",
            "--n",
            "2",
            "--k-range",
            "1:1",
            "--method",
            "mc",
            "--out",
            "json",
        ]);
        match env_val {
            Some(v) => cmd.env("CIGF_CONFIG", v),
            None => cmd.env_remove("CIGF_CONFIG"),
        };
        cmd.output().expect("binary runs")
    };
    let with_env = run_env(Some(path.to_str().unwrap()));
    assert!(with_env.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&with_env).trim()).unwrap();
    // 2000 trials give a visibly coarser error estimate than the default
    assert!(v["err_est"].as_f64().unwrap() > 1e-2);
    std::fs::remove_file(&path).ok();
}

#[test]
fn empirical_distribution_from_file() {
    let path = std::env::temp_dir().join("cigf_cli_samples.csv");
    std::fs::write(&path, "0.0\n1.0\n").unwrap();
    let spec = format!("emp:@{}", path.display());
    let out = run(&[
        "measure",
        "--dist",
        &spec,
        "--measure",
        "cigf",
        "--alpha",
        "2",
        "--beta",
        "1",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    // the symmetric two-point law: G(2, 1) = (1/2)^2 (1/2) = 1/8
    assert!((v["value"].as_f64().unwrap() - 0.125).abs() < 1e-12);
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_detects_single_suite() {
    let out = run(&["verify", "--suite", "table2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("table2/"));

    let out = run(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}
