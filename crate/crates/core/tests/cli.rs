mod common;

use std::fs;
use std::path::Path;

use serde_json::Value;

use common::{fixture, odoni};
use odoni::construct::IterInstance;

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn stdout_json(out: &std::process::Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(odoni(&[]).status.code(), Some(2));
    assert_eq!(odoni(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(odoni(&["construct"]).status.code(), Some(2));
    assert_eq!(odoni(&["construct", "--degree", "1"]).status.code(), Some(2));
    assert_eq!(odoni(&["certify", "--params", "/nonexistent/params.json"]).status.code(), Some(2));
    assert_eq!(odoni(&["construct", "--degree", "3", "--case", "odd-case-9"]).status.code(), Some(2));
    assert_eq!(odoni(&["--help"]).status.code(), Some(0));
}

#[test]
fn construct_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    for d in [2u32, 5, 9] {
        let a = dir.path().join(format!("a{d}.json"));
        let b = dir.path().join(format!("b{d}.json"));
        for p in [&a, &b] {
            let out = odoni(&["construct", "--degree", &d.to_string(), "--out", p.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0));
        }
        let text = fs::read_to_string(&a).unwrap();
        assert_eq!(text, fs::read_to_string(&b).unwrap(), "construct not deterministic for d={d}");

        let inst: IterInstance = serde_json::from_str(&text).unwrap();
        inst.validate().unwrap();
        let again: IterInstance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(inst, again);
        for key in ["d", "m", "s", "t", "x0", "b", "p", "p1", "p2"] {
            assert!(read_json(&a)[key].is_string(), "{key} should serialize as a string");
        }

        let cert = dir.path().join(format!("c{d}.json"));
        let out = odoni(&["certify", "--params", a.to_str().unwrap(), "--depth", "2", "--out", cert.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let cert = read_json(&cert);
        assert_eq!(cert["verdict"], "pass");
        assert_eq!(cert["depth"], 2);
    }
}

#[test]
fn forced_case_is_recorded() {
    let out = odoni(&["construct", "--degree", "5", "--case", "odd-case-2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["case"], "odd-case-2");
}

#[test]
fn tampered_b_names_condition_2() {
    let out = odoni(&["certify", "--params", fixture("tampered_b.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("condition 2b"));
    let cert = stdout_json(&out);
    assert_eq!(cert["verdict"], "fail");
    assert_eq!(cert["first_failure"], "condition 2b");
}

#[test]
fn square_prime_names_nonsquare() {
    let out = odoni(&["certify", "--params", fixture("square_fn.json").to_str().unwrap(), "--depth", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let cert = stdout_json(&out);
    assert_eq!(cert["first_failure"], "F_1 nonsquare");
    assert_eq!(cert["records"][0]["nonsquare_plus"], false);
}

#[test]
fn scaled_base_point_breaks_eisenstein() {
    let out = odoni(&["certify", "--params", fixture("non_eisenstein.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let cert = stdout_json(&out);
    assert_eq!(cert["first_failure"], "condition 1");
    let failures: Vec<&str> = cert["failures"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
    assert!(failures.contains(&"Eisenstein n=1"), "{failures:?}");
}

#[test]
fn disc_trinomial_pinned() {
    let out = odoni(&["disc", "--coeffs", "1,-1,1", "-d", "3", "-m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["closed_form"], "-23/1");
    assert_eq!(v["resultant"], "-23/1");
    assert_eq!(v["agree"], true);
}

#[test]
fn disc_levels_for_instance() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    assert_eq!(odoni(&["construct", "--degree", "3", "--out", p.to_str().unwrap()]).status.code(), Some(0));
    let out = odoni(&["disc", "--params", p.to_str().unwrap(), "--level", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 2);
    assert_eq!(levels[0]["disc"], "-1558175/117649");
}

#[test]
fn newton_accepts_negative_coefficients() {
    let out = odoni(&["newton", "--coeffs", "-2/9,0,0,-1/9,0,1", "--prime", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["segments"][0]["slope"], "0/1");
    assert_eq!(v["segments"][0]["length"], 3);
    assert_eq!(v["segments"][1]["slope"], "1/1");
    assert_eq!(v["segments"][1]["length"], 2);
}

#[test]
fn group_check_formats() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.json");
    fs::write(&p, r#"{"d":5,"m":3,"G":["(1 2 3 4 5)","(4 5)"],"H":[[2,3,1,4,5]]}"#).unwrap();
    let out = odoni(&["group-check", "--gens", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["hypotheses_hold"], true);
    assert_eq!(v["group_order"], 120);

    // m = 2 is not in (d/2, d)
    fs::write(&p, r#"{"d":5,"m":2,"G":["(1 2 3 4 5)"],"H":["(1 2)"]}"#).unwrap();
    assert_eq!(odoni(&["group-check", "--gens", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn frobenius_seed_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    assert_eq!(odoni(&["construct", "--degree", "3", "--out", p.to_str().unwrap()]).status.code(), Some(0));
    let run = |seed: &str| {
        std::process::Command::new(common::bin())
            .args(["frobenius", "--params", p.to_str().unwrap(), "--primes", "60"])
            .env("ODONI_SEED", seed)
            .output()
            .unwrap()
    };
    let (a, b) = (run("7"), run("7"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["label"], "statistical");
    assert_eq!(v["prime_count"], 60);
}

#[test]
fn pipeline_small() {
    let out = odoni(&["pipeline", "--degree", "2", "--depth", "2", "--primes", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["params"]["d"], "2");
    assert!(v["frobenius"]["tv_distance"].as_f64().is_some());
}
