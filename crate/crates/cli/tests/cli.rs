use std::fs;
use std::process::{Command, Output};

use extremal_core::variation::IdentityReport;
use extremal_core::Modulus;
use serde_json::Value;

fn extremal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extremal"))
        .args(args)
        .env("RUST_BACKTRACE", "0")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("bad json {e}: {}", stdout(o)))
}

#[test]
fn ext_at_the_square_torus() {
    let o = extremal(&["ext", "--tau", "0+1i", "--curve", "1,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"ext":1.0}"#);
}

#[test]
fn lower_half_plane_is_an_argument_error() {
    let o = extremal(&["ext", "--tau", "0-1i", "--curve", "1,0"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("tau must lie in the upper half-plane"), "{err}");
    assert!(err.contains("--tau"));
    assert_eq!(err.trim().lines().count(), 1);
}

#[test]
fn pair_sum_anchor() {
    let o = extremal(&["pair-sum", "--tau", "0+1i", "--curve", "1,0", "--mu", "1+0i"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o), serde_json::json!({"pair_sum": 8.0, "positive": true}));
}

#[test]
fn argument_errors_name_the_flag() {
    let cases: &[(&[&str], &str)] = &[
        (&["ext", "--tau", "0+1i", "--curve", "1,0", "--bogus"], "--bogus"),
        (&["ext", "--tau", "0+1i", "--curve", "2,2"], "--curve"),
        (&["ext", "--tau", "0+1i"], "--curve"),
        (&["ext", "--tau", "0+1i", "--curve", "1,0", "--format", "xml"], "--format"),
        (&["eq11", "--tau", "0+1i", "--curve", "1,0", "--mu-fn", "nope", "--grid", "32"], "--mu"),
        (&["eq11", "--tau", "0+1i", "--curve", "1,0", "--mu-fn", "cos2pis", "--grid", "30"], "--grid"),
        (&["sweep", "--curve", "1,0", "--re", "0:1:0.5", "--im", "-1:1:0.5"], "--im"),
        (&["sweep", "--curve", "1,0", "--re", "0:1", "--im", "1:2:1"], "--re"),
        (&["verify", "--tol", "bogus=1"], "--tol"),
        (&["verify", "--tol", "fd_step_first=0.5"], "--tol"),
        (&["distance", "--tau", "0+1i"], "--tau"),
        (&["pair-sum", "--tau", "0+1i", "--curve", "1,0"], "--mu"),
    ];
    for (args, flag) in cases {
        let o = extremal(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn computation_failures_exit_1() {
    let cases: &[&[&str]] = &[
        // the constant path degenerates at |t mu| = 1
        &["ext", "--tau", "0+1i", "--curve", "1,0", "--mu", "2+0i", "--t", "0.6"],
        // second variation is defined for harmonic fields only
        &["vary2", "--tau", "0+1i", "--curve", "1,0", "--mu-fn", "cos2pis", "--grid", "16"],
        // geodesic directions must have unit modulus
        &["bound", "--tau", "0+1i", "--curve", "1,0", "--mu", "0.5+0i"],
        &["pair-sum", "--tau", "0+1i", "--curve", "1,0", "--mu", "0+0i"],
        &["levi", "--tau", "0+1e-4i", "--curve", "1,0", "--step", "1e-4"],
    ];
    for args in cases {
        let o = extremal(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).starts_with("error: "), "{args:?}");
    }
}

#[test]
fn single_value_commands() {
    let o = extremal(&["levi", "--tau", "0+1i", "--curve", "1,1", "--step", "1e-4"]);
    let v = json(&o);
    assert_eq!(v["levi"], 1.0);
    assert!((v["fd_levi"].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let o = extremal(&["vary1", "--tau", "0+1i", "--curve", "0,1", "--mu", "1+0i", "--step", "1e-4"]);
    let v = json(&o);
    assert!((v["first_variation"].as_f64().unwrap() + 2.0).abs() < 1e-15);
    assert!((v["fd_first_variation"].as_f64().unwrap() + 2.0).abs() < 1e-7);

    let o = extremal(&["vary2", "--tau", "0+1i", "--curve", "1,0", "--mu", "0+1i"]);
    assert_eq!(json(&o)["second_variation"], 4.0);

    let o = extremal(&["distance", "--tau", "0+1i", "--tau", "0+2i", "--max-pq", "50"]);
    let v = json(&o);
    assert!((v["distance"].as_f64().unwrap() - 0.5 * std::f64::consts::LN_2).abs() < 1e-12);
    assert_eq!(v["maximizer"], serde_json::json!([0, 1]));

    // the deformed modulus is reported in a+bi form and parses back exactly
    let o = extremal(&["ext", "--tau", "0.3+1.1i", "--curve", "1,2", "--mu", "0.2-0.1i", "--t", "0.5"]);
    let v = json(&o);
    let tau: Modulus = v["tau"].as_str().unwrap().parse().unwrap();
    assert_eq!(tau.to_string(), v["tau"].as_str().unwrap());
}

#[test]
fn reports_round_trip() {
    for args in [
        &["eq11", "--tau", "0.2+1.3i", "--curve", "2,-1", "--mu-fn", "mixed_modes", "--grid", "32"][..],
        &["eq15", "--tau", "0+1i", "--curve", "1,0", "--mu-fn", "cos2pis", "--grid", "64"],
        &["bound", "--tau", "0+1i", "--curve", "1,0", "--mu", "0+1i"],
    ] {
        let o = extremal(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let r: IdentityReport = serde_json::from_str(&stdout(&o)).unwrap();
        let again = serde_json::to_value(&r).unwrap();
        assert_eq!(again, json(&o));
    }
    // the pair-sum integrand check is reported, never asserted
    let o = extremal(&["eq15", "--tau", "0+1i", "--curve", "1,0", "--mu-fn", "cos2pis", "--grid", "64"]);
    let r: IdentityReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!r.asserted);
    assert!((r.lhs - 0.5).abs() < 1e-10);
    assert!((r.rhs - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-10);
}

#[test]
fn solve_field_outputs() {
    let base = ["solve-field", "--tau", "0+1i", "--curve", "-1,0", "--mu-fn", "cos2pis", "--grid", "16", "--mu-scale", "0+1i"];
    let o = extremal(&base);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["N"], 16);
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 256);
    for (i, x) in values.iter().enumerate() {
        let s = (i % 16) as f64 / 16.0;
        let expect = (2.0 * std::f64::consts::PI * s).sin() / std::f64::consts::PI;
        assert!((x.as_f64().unwrap() - expect).abs() < 1e-12);
    }

    let mut csv_args = base.to_vec();
    csv_args.extend(["--format", "csv"]);
    let o = extremal(&csv_args);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,t,value"));
    assert_eq!(lines.count(), 256);
}

#[test]
fn sweep_csv() {
    let args = ["sweep", "--curve", "1,1", "--re", "-0.5:0.5:0.25", "--im", "0.5:1.5:0.5"];
    let o = extremal(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re,im,ext,levi");
    assert_eq!(lines.len(), 1 + 5 * 3);
    // row-major over im then re
    let row = |i: usize| -> Vec<f64> { lines[i].split(',').map(|x| x.parse().unwrap()).collect() };
    assert_eq!(row(1)[..2], [-0.5, 0.5]);
    assert_eq!(row(2)[..2], [-0.25, 0.5]);
    assert_eq!(row(6)[..2], [-0.5, 1.0]);
    for i in 1..lines.len() {
        let r = row(i);
        let tau = Modulus::new(r[0], r[1]).unwrap();
        let c = extremal_core::CurveClass::new(1, 1).unwrap();
        // 17 significant digits survive the round trip bit for bit
        assert_eq!(r[2], extremal_core::extremal_length(tau, c));
        assert_eq!(r[3], extremal_core::levi_form(tau, c));
        for field in lines[i].split(',') {
            let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.replace('.', "").len(), 17, "{field}");
        }
    }
    assert_eq!(extremal(&args).stdout, o.stdout);

    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let v = json(&extremal(&json_args));
    assert_eq!(v.as_array().unwrap().len(), 15);
    assert_eq!(v[0].as_object().unwrap().keys().collect::<Vec<_>>(), ["re", "im", "ext", "levi"]);
}

#[test]
fn verify_defaults_pass() {
    let o = extremal(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let reports: Vec<IdentityReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(reports.len() > 13);
    assert!(reports.iter().filter(|r| r.asserted).all(|r| r.pass));
    assert!(stderr(&o).contains("ALL PASSED"));
}

#[test]
fn verify_with_impossible_tolerance_fails() {
    let o = extremal(&["verify", "--tol", "rel_tol_first=1e-15", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(1));
    let reports: Vec<IdentityReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(reports.iter().any(|r| r.asserted && !r.pass));
}

#[test]
fn out_file_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.json");
    let o = extremal(&["verify", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let reports: Vec<IdentityReport> = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(!reports.is_empty());

    let csv_path = dir.path().join("reports.csv");
    let o = extremal(&["verify", "--format", "csv", "--out", csv_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("name,lhs,rhs,abs_err,rel_err,tolerance,pass,asserted,relation\n"));
}

#[test]
fn io_errors_exit_3() {
    let o = extremal(&["ext", "--tau", "0+1i", "--curve", "1,0", "--out", "/nonexistent-dir/x/out.json"]);
    assert_eq!(o.status.code(), Some(3));
    let o = extremal(&["--scenario", "/nonexistent-dir/scenario.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn scenario_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    fs::write(
        &path,
        r#"{"command": "pair-sum", "tau": "0+1i", "curve": [1, 0], "mu": {"constant": "1+0i"}}"#,
    )
    .unwrap();
    let o = extremal(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        stdout(&extremal(&["pair-sum", "--tau", "0+1i", "--curve", "1,0", "--mu", "1+0i"]))
    );

    fs::write(
        &path,
        r#"{"command": "eq11", "tau": "0.5+0.9i", "curve": [1, 2], "mu": {"function": "exp2pis", "N": 32, "scale": "0.2+0.1i"}}"#,
    )
    .unwrap();
    let o = extremal(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    for bad in [
        r#"{"command": "ext", "tau": "0+1i", "curve": [1, 0], "seed": 3}"#,
        r#"{"command": "ext", "tau": "0+1i", "curve": [1, 0], "colour": 3}"#,
        r#"{"command": "ext", "tau": "0-1i", "curve": [1, 0]}"#,
        r#"not json"#,
    ] {
        fs::write(&path, bad).unwrap();
        let o = extremal(&["--scenario", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
    }
}

#[test]
fn help_lists_flags_with_defaults() {
    let expected: &[(&str, &[&str])] = &[
        ("ext", &["--tau", "--curve", "--mu", "--t", "--out", "--format"]),
        ("levi", &["--tau", "--curve", "--step", "at most 1e-3"]),
        ("vary1", &["--mu", "--mu-fn", "--grid", "--mu-scale", "--step"]),
        ("vary2", &["--mu", "--mu-fn", "--grid", "--step"]),
        ("pair-sum", &["--tau", "--curve", "--mu"]),
        ("solve-field", &["--mu-fn", "--grid", "power of two"]),
        ("eq11", &["--tol", "default: 1e-10"]),
        ("eq15", &["--mu-fn", "--grid"]),
        ("distance", &["--tau", "--max-pq", "default: 50"]),
        ("bound", &["--mu", "--step", "default: 1e-3"]),
        ("sweep", &["--curve", "--re", "--im", "LO:HI:STEP"]),
        ("verify", &["--tol", "--seed", "default: 42", "rel_tol_first=1e-6"]),
    ];
    for (cmd, flags) in expected {
        let o = extremal(&[cmd, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        for f in *flags {
            assert!(text.contains(f), "{cmd} --help lacks {f}:\n{text}");
        }
    }
}
