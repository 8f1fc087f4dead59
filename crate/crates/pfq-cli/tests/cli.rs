use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pfq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfq"))
        .args(args)
        .output()
        .expect("run pfq")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("pfq-cli-{}-{name}", std::process::id()))
}

const F27: [&str; 6] = ["--p", "3", "--k", "3", "--ell", "1"];

fn with_field<'a>(rest: &[&'a str]) -> Vec<&'a str> {
    F27.iter().copied().chain(rest.iter().copied()).collect()
}

#[test]
fn classify_x_q_plus_q_is_f1_planar() {
    let o = pfq(&with_field(&["classify", "--c", "0,0,1,0"]));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["class"], "F1");
    assert_eq!(v["family"], "i3");
    assert_eq!(v["verdict"], true);
    assert_eq!(v["rule"], "F1KEllOverDeltaSqOdd");
}

#[test]
fn classify_constant_g_is_not_planar() {
    let o = pfq(&with_field(&["classify", "--c", "1,0,0,1"]));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["class"], "ConstantG");
    assert_eq!(v["verdict"], false);
}

#[test]
fn witness_is_reported_on_request() {
    let o = pfq(&with_field(&["classify", "--c", "0,0,1,0", "--witness"]));
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["witness"].is_object());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        pfq(&with_field(&["classify", "--c", "0,0,0,0"]))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pfq(&with_field(&["classify", "--c", "0,0,7"]))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pfq(&with_field(&["classify", "--c", "0,0,9,1"]))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pfq(&["classify", "--c", "0,0,1,0"]).status.code(), Some(2));
    assert_eq!(
        pfq(&["--p", "4", "classify", "--c", "0,0,1,0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pfq(&["bogus"]).status.code(), Some(2));
}

#[test]
fn field_json_round_trip() {
    let spec = r#"{"p":3,"k":1,"ell":1,"modulus_q":[0,1],"modulus_q2":[[1],[0],[1]]}"#;
    let o = pfq(&["--field", spec, "planar", "--c", "0,0,1,0", "--both"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(v["agree"], true);
}

#[test]
fn planar_both_routes_agree() {
    for c in ["0,0,0,1", "1,0,1,1", "0,1,0,0"] {
        let o = pfq(&[
            "--p", "3", "--k", "2", "--ell", "1", "planar", "--c", c, "--both",
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(json(&o)["agree"], true);
    }
    let o = pfq(&with_field(&["planar", "--c", "0,0,1,0", "--oracle-only"]));
    let v = json(&o);
    assert_eq!(v["brute"]["planar"], true);
    assert!(v.get("classifier").is_none());
}

#[test]
fn invariants_and_geometry() {
    let o = pfq(&with_field(&["invariants", "--c", "1,2,0+u*1,1"]));
    assert_eq!(o.status.code(), Some(0));
    let o = pfq(&["--p", "3", "geometry", "--c", "0,0,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["hurwitz"]["lhs"], 6);
    assert_eq!(v["hurwitz"]["rhs"], 6);
}

#[test]
fn family_members_match_their_rules() {
    // nonsquare and square epsilon in F_27
    for (eps, planar) in [("2", true), ("1", false)] {
        let o = pfq(&with_field(&[
            "family",
            "--tag",
            "p2",
            "--epsilon",
            eps,
            "--planar",
        ]));
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert_eq!(v["brute"]["planar"], planar);
        assert_eq!(v["agree"], true);
    }
    let o = pfq(&with_field(&["family", "--tag", "p3", "--epsilon", "2"]));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn census_exhaustive_f9_has_no_disagreements() {
    let out = tmp("f9.csv");
    let o = pfq(&[
        "--p",
        "3",
        "census",
        "--exhaustive",
        "--cross-check",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = json(&o);
    assert_eq!(s["total"], 6560);
    assert_eq!(s["cross_checked"], 6560);
    assert_eq!(s["disagreements"], 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 6561);
    assert!(csv.starts_with(
        "c,coarse,family,class,epsilon,epsilon_square_class,verdict_class,verdict_brute,agree"
    ));
    let _ = std::fs::remove_file(out);
}

#[test]
fn census_is_byte_deterministic() {
    let run = |seed: &str| {
        let o = pfq(&with_field(&[
            "--seed",
            seed,
            "census",
            "--samples",
            "200",
            "--cross-check",
            "0.05",
        ]));
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    let a = run("11");
    assert_eq!(a, run("11"));
    assert_ne!(a, run("12"));
}

#[test]
fn exhaustive_census_over_budget() {
    let o = pfq(&with_field(&["census", "--exhaustive"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds budget"));
}

#[test]
fn verify_passes_and_catches_injected_fault() {
    let o = pfq(&[
        "verify",
        "--fields",
        "3,1,1",
        "3,3,1",
        "3,3,2",
        "5,1,1",
        "--samples",
        "20",
        "--brute-samples",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let o = pfq(&["verify", "--fields", "3,1,1", "--inject-e4-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("FAIL 3,1,1 identities"));
    assert!(text.contains("e4: false"));
}

#[test]
fn charsum_certificates() {
    let o = pfq(&with_field(&["charsum", "appendix-a", "--epsilon", "1"]));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["positive"], true);
    assert_eq!(v["brute"]["planar"], false);
    let o = pfq(&with_field(&[
        "charsum",
        "appendix-b",
        "--epsilon",
        "1+u*1",
    ]));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["weil_ok"], true);
    // -1 is excluded for P3
    let o = pfq(&with_field(&["charsum", "appendix-a", "--epsilon", "2"]));
    assert_eq!(o.status.code(), Some(2));
}
