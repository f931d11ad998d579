use serde_json::Value;
use std::process::{Command, Output};

fn wpb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wpb"))
        .args(args)
        .env_remove("WPB_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time");
    v
}

#[test]
fn curvature_spot_values() {
    let o = wpb(&["curvature", "--genus", "2", "--punctures", "0", "--systole", "0.1", "--json"]);
    assert_eq!(code(&o), 0);
    let d = &json(&o)["details"];
    assert!(rel(d["sca_lo"].as_f64().unwrap(), -110.0) < 1e-3);
    assert!(rel(d["ric_lo"].as_f64().unwrap(), -33.394) < 1e-3);
    assert!(rel(d["sec_perp_lo"].as_f64().unwrap(), -4.0) < 1e-3);
    assert!(rel(d["sca_hi"].as_f64().unwrap(), -0.95493) < 1e-3);
    assert!(d["constants_used"].as_array().unwrap().len() >= 4);
}

#[test]
fn curvature_thick_systole_reports_notice() {
    let o = wpb(&["curvature", "--genus", "2", "--systole", "5", "--json"]);
    assert_eq!(code(&o), 0);
    let d = &json(&o)["details"];
    assert!(d["sec_lo"].is_null());
    assert!(d["sca_lo"].as_f64().unwrap() < 0.0);
    assert!(!d["notes"].as_array().unwrap().is_empty());
}

#[test]
fn curvature_rejects_small_topology() {
    let o = wpb(&["curvature", "--genus", "1", "--punctures", "1", "--systole", "0.5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn certify_report_fields() {
    let o = wpb(&["certify", "--check", "m_sup", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for key in ["tool_version", "seed", "checks", "summary", "wall_time"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let c = &v["checks"][0];
    for key in ["check_id", "target", "interval", "claim", "enclosure", "status"] {
        assert!(c.get(key).is_some(), "missing {key}");
    }
    assert_eq!(c["status"], "certified_true");
    let enc = c["enclosure"].as_array().unwrap();
    let (lo, hi) = (enc[0].as_f64().unwrap(), enc[1].as_f64().unwrap());
    assert!(hi - lo <= 1e-4 && hi <= 0.9137);
    assert_eq!(v["summary"]["pass"], 1);
}

#[test]
fn certify_unknown_id_is_usage_error() {
    assert_eq!(code(&wpb(&["certify", "--check", "no_such_check"])), 2);
}

#[test]
fn exhausted_depth_is_inconclusive() {
    let o = wpb(&["certify", "--check", "m_sup", "--depth", "0", "--json"]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["summary"]["inconclusive"], 1);
}

#[test]
fn constants_report_the_misprinted_product() {
    let o = wpb(&["constants", "--json"]);
    let v = json(&o);
    assert_eq!(code(&o), 1);
    let checks = v["checks"].as_array().unwrap();
    let bad: Vec<_> = checks.iter().filter(|c| c["status"] == "violated").map(|c| c["check_id"].as_str().unwrap()).collect();
    assert_eq!(bad, vec!["sqrt_2eps2_C_eps2"]);
    assert_eq!(v["summary"]["violated"], 1);
}

#[test]
fn tight_tolerance_makes_sup_constants_informational() {
    let v = json(&wpb(&["constants", "--tol", "1e-9", "--json"]));
    let m0 = v["checks"].as_array().unwrap().iter().find(|c| c["check_id"] == "m0_sup").unwrap();
    assert_eq!(m0["status"], "informational");
}

#[test]
fn verify_random_is_reproducible() {
    let args = ["verify-random", "--seed", "7", "--trials", "6", "--modes", "4", "--json"];
    let a = wpb(&args);
    let b = wpb(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(without_wall_time(json(&a)), without_wall_time(json(&b)));
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    assert_eq!(without_wall_time(json(&a)), without_wall_time(json(&wpb(&seq_args))));
    let v = json(&a);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["summary"]["total"], 6);
}

#[test]
fn single_zero_mode_trial_attains_profile() {
    let o = wpb(&["verify-random", "--trials", "1", "--modes", "0", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let checks = v["checks"][0]["checks"].as_array().unwrap();
    let z = checks.iter().find(|c| c["check_id"] == "zero_mode_profile").unwrap();
    assert!(z["min_margin"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(v["checks"][0]["length"].as_f64().unwrap(), 2.0 * 1f64.asinh());
}

#[test]
fn verify_random_rejects_bad_ranges() {
    assert_eq!(code(&wpb(&["verify-random", "--trials", "0"])), 2);
    assert_eq!(code(&wpb(&["verify-random", "--Lmax", "2.0"])), 2);
    assert_eq!(code(&wpb(&["verify-random", "--Lmin", "0.5", "--Lmax", "0.4"])), 2);
}

#[test]
fn plotdata_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let p = path.to_str().unwrap();
    let o = wpb(&["plotdata", "--functions", "twoF,C", "--samples", "2", "--out", p]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "r,twoF,C");
    // 17 significant digits
    let first = lines[1].split(',').next().unwrap();
    let mantissa = first.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17);
    let again = wpb(&["plotdata", "--functions", "twoF,C", "--samples", "2"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn plotdata_bad_name_is_usage_error() {
    assert_eq!(code(&wpb(&["plotdata", "--functions", "H,bogus"])), 2);
}

#[test]
fn sharpness_perp_below_sqrt2() {
    let o = wpb(&["sharpness", "--L", "0.4", "--modes", "16", "--points", "21", "--constraint", "perp"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<_> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "extremal_ratio").unwrap();
    let mut rows = 0;
    for line in lines {
        let v: f64 = line.split(',').nth(col).unwrap().parse().unwrap();
        assert!(v <= 2f64.sqrt());
        rows += 1;
    }
    assert_eq!(rows, 21);
    assert_eq!(code(&wpb(&["sharpness", "--L", "3"])), 2);
}

#[test]
fn thread_cap_from_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_wpb"))
            .args(["delta", "--eps", "1e-3", "--json"])
            .env("WPB_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("1")), 0);
    assert_eq!(code(&run("0")), 2);
    assert_eq!(code(&run("many")), 2);
}

#[test]
fn delta_matches_asymptotic() {
    let o = wpb(&["delta", "--json"]);
    assert_eq!(code(&o), 0);
    for d in json(&o)["details"].as_array().unwrap() {
        let ratio = d["delta"].as_f64().unwrap() / d["asymptotic"].as_f64().unwrap();
        assert!((0.95..=1.05).contains(&ratio), "{d}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&wpb(&["--help"])), 0);
    assert_eq!(code(&wpb(&["no-such-command"])), 2);
}
