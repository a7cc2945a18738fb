use std::process::{Command, Output};

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coeffforge"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn coeffforge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn revert_koebe() {
    let o = run(&["revert", "koebe", "--order", "4"], &[]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "w - 2w^2 + 5w^3 - 14w^4");
}

#[test]
fn revert_extremal_alias_and_file_round_trip() {
    let o = run(&["revert", "extremal:1/2", "--order", "4"], &[]);
    assert_eq!(stdout(&o).trim(), "w - 3/2w^2 + 11/4w^3 - 45/8w^4");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, "[[0,0],[1,0],[2,0],[3,0]]").unwrap();
    let o = run(
        &[
            "revert",
            path.to_str().unwrap(),
            "--mode",
            "float",
            "--format",
            "json",
        ],
        &[],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let inv = v["inverse"].as_array().unwrap();
    assert_eq!(inv[2][0].as_f64().unwrap(), -2.0);
    assert_eq!(inv[3][0].as_f64().unwrap(), 5.0);
}

#[test]
fn revert_rejects_unnormalized() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, "[[0,0],[2,0],[1,0]]").unwrap();
    let o = run(&["revert", path.to_str().unwrap(), "--mode", "float"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("coeffforge: error["), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn bounds_half() {
    let o = run(&["bounds", "--lambda", "1/2"], &[]);
    let out = stdout(&o);
    assert!(out.contains("B2 = 3/2"));
    assert!(out.contains("B3 = 11/4"));
    assert!(out.contains("B4 = 45/8"));
}

#[test]
fn bounds_lambda_out_of_range() {
    let o = run(&["bounds", "--lambda", "1.5"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error[lambda-range]"));
    let o = run(&["bounds", "--lambda", "0"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coeffs_routes_agree() {
    let jet = r#"{"c1":["1/3","1/5"],"c2":["1/10","0"],"c3":[0.01,-0.02]}"#;
    let o = run(
        &[
            "coeffs", "--lambda", "3/4", "--jet", jet, "--format", "json",
        ],
        &[],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["routes_agree"], true);
    assert_eq!(v["inverse_closed_form"], v["inverse_via_reversion"]);
}

#[test]
fn verify_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [
        ("zero.json", r#"{"samples":0}"#),
        ("lambda.json", r#"{"lambda_grid":[0.5,1.5]}"#),
        ("unknown.json", r#"{"bogus":1}"#),
    ] {
        let path = dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        let o = run(&["verify", "--config", path.to_str().unwrap()], &[]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).starts_with("coeffforge: error["), "{name}");
    }
}

#[test]
fn verify_small_run_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.csv");
    let o = run(
        &["verify", "--samples", "500", "--out", out.to_str().unwrap()],
        &[],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("functional,lambda,mu,theoretical,empirical_max,gap,samples,seed\n"));
    assert_eq!(csv.lines().count(), 21);
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn membership_verdicts() {
    let o = run(
        &["membership", "koebe", "--lambda", "1/2", "--radius", "0.9"],
        &[],
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict = fails"));

    let o = run(
        &[
            "membership",
            "extremal:1/4",
            "--lambda",
            "1/4",
            "--radius",
            "0.5",
            "--format",
            "json",
        ],
        &[],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["member"], true);
    assert!((v["max_defect"].as_f64().unwrap() - 0.0625).abs() < 1e-12);

    let o = run(
        &[
            "membership",
            "identity",
            "--lambda",
            "1/2",
            "--radius",
            "1.0",
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn membership_profile_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = run(
        &[
            "membership",
            "koebe",
            "--lambda",
            "1",
            "--radius",
            "0.5",
            "--samples",
            "16",
            "--out",
            out.to_str().unwrap(),
        ],
        &[],
    );
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("theta,abs_defect\n"));
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn fekete_szego_command() {
    let o = run(
        &[
            "fekete-szego",
            "--lambda",
            "1/2",
            "--mu",
            "1/2",
            "--samples",
            "500",
        ],
        &[],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("bound = 1.625"));
    assert!(out.contains("A3 - mu A2^2 = 13/8"));
}

#[test]
fn scan_output_independent_of_thread_count() {
    let args = [
        "scan",
        "--functional",
        "A4",
        "--lambda",
        "0.25,0.5,1",
        "--samples",
        "20000",
        "--seed",
        "7",
    ];
    let one = run(&args, &[("COEFFFORGE_THREADS", "1")]);
    let eight = run(&args, &[("COEFFFORGE_THREADS", "8")]);
    assert!(one.status.success() && eight.status.success());
    assert_eq!(one.stdout, eight.stdout);

    let bad = run(&args, &[("COEFFFORGE_THREADS", "zero")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_csv_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "8"] {
        let out = dir.path().join(format!("v{threads}.csv"));
        let o = run(
            &[
                "verify",
                "--samples",
                "5000",
                "--seed",
                "11",
                "--out",
                out.to_str().unwrap(),
            ],
            &[("COEFFFORGE_THREADS", threads)],
        );
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
