use serde_json::Value;

use lambda_taylor::cli::run;
use lambda_taylor::corpus::term;
use lambda_taylor::finiteness::{duality_audit, StructureTag};
use lambda_taylor::taylor::nf_taylor;
use lambda_taylor::types::remark1_derivation;

fn cli(args: &[&str]) -> lambda_taylor::cli::Outcome {
    run(std::iter::once("lambda-taylor").chain(args.iter().copied()))
}

#[test]
fn sn_omega_reports_cycle() {
    let out = cli(&["sn", "--corpus", "Omega", "--expect-sn"]);
    assert_eq!(out.stdout, "NotSN: cycle Omega -> Omega\n");
    assert_eq!(out.code, 1);
    assert_eq!(cli(&["sn", "--corpus", "Omega"]).code, 0);
}

#[test]
fn sn_delta_identity() {
    let out = cli(&["sn", "--corpus", "DeltaI", "--expect-sn"]);
    assert_eq!(out.stdout, "SN: max reduction length 2\n");
    assert_eq!(out.code, 0);
}

#[test]
fn nf_taylor_json_is_the_library_report() {
    let out = cli(&["nf-taylor", "--corpus", "DeltaI", "--max-bound", "3", "--format", "json"]);
    assert_eq!(out.code, 0);
    let expected = nf_taylor(&term("DeltaI"), 3).to_json();
    assert_eq!(out.stdout, format!("{}\n", serde_json::to_string_pretty(&expected).unwrap()));
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let stable = v["stable"].as_array().unwrap();
    assert_eq!(stable.len(), 1);
    assert_eq!(stable[0]["nf"], "\\x. x");
    assert_eq!(stable[0]["num"], 1);
    assert_eq!(stable[0]["den"], 1);
}

#[test]
fn audit_singletons_omega3() {
    let out = cli(&["audit", "--corpus", "Omega3", "--tests", "singletons", "--max-bound", "2"]);
    assert_eq!(out.code, 0);
    let report = duality_audit(&term("Omega3"), &StructureTag::Singletons, 2);
    assert_eq!(out.stdout, report.to_string());
    assert!(report.counts().iter().all(|&c| c <= 1));
    let json = cli(&["audit", "--corpus", "Omega3", "--max-bound", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&json.stdout).unwrap();
    for row in v["rows"].as_array().unwrap() {
        assert!(row["k"].is_u64() && row["count"].as_u64().unwrap() <= 1 && row["witnesses"].is_array());
    }
    assert!(v["verdict"].is_string());
}

#[test]
fn audit_explicit_sets() {
    let out = cli(&["audit", "--term", "(\\x. x x) (\\x. x x)", "--tests", "explicit", "--test-set", "(\\x. x [x]) [\\x. x [x]]", "--max-bound", "3"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("GrowthDetected"), "{}", out.stdout);
}

#[test]
fn usage_errors_exit_two_with_grammar() {
    let out = cli(&["parse", "--term", "\\x. ("]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("λ-terms:"));
    let out = cli(&["parse", "--term", "x", "--corpus", "I"]);
    assert_eq!(out.code, 2);
    let out = cli(&["frobnicate"]);
    assert_eq!(out.code, 2);
    let out = cli(&["parse"]);
    assert_eq!(out.code, 2);
    assert_eq!(cli(&["sn", "--corpus", "Nope"]).code, 2);
}

#[test]
fn parse_and_normalize() {
    let out = cli(&["parse", "--term", "(\\x. x) y + z"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "z + (\\x. x) y\nsize 6 height 3 free {y, z}\n");
    let out = cli(&["normalize", "--corpus", "DeltaI"]);
    assert_eq!(out.stdout, "\\x. x\n(2 steps)\n");
    let out = cli(&["normalize", "--corpus", "Omega", "--fuel", "50"]);
    assert_eq!(out.code, 1);
}

#[test]
fn coefficients_and_rigs() {
    let out = cli(&["coeff", "--corpus", "DeltaI", "--resource", "(\\x. x [x, x]) [\\x. x, \\x. x]"]);
    assert_eq!(out.stdout, "1/4\n");
    let out = cli(&["taylor", "--corpus", "DeltaI", "--bag-bound", "2", "--rig", "nat"]);
    assert_eq!(out.code, 2, "1/2 is not a natural number");
    let out = cli(&["taylor", "--corpus", "DeltaI", "--bag-bound", "2", "--rig", "bool"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.lines().filter(|l| l.contains('[')).all(|l| l.starts_with("1  ")));
    let out = cli(&["linexp", "--corpus", "Omega"]);
    assert_eq!(out.stdout, "(\\x. x [x]) [\\x. x [x]]\n");
}

#[test]
fn typecheck_and_synth() {
    let path = std::env::temp_dir().join(format!("remark1-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(&remark1_derivation().to_json()).unwrap()).unwrap();
    let out = cli(&["typecheck", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("valid:"));
    for name in ["I", "K", "DeltaI", "Remark1"] {
        assert_eq!(cli(&["synth", "--corpus", name]).code, 0, "{name}");
    }
    let out = cli(&["synth", "--corpus", "Omega"]);
    assert_eq!(out.code, 1);
    let out = cli(&["synth", "--corpus", "K", "--format", "json"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["rule"], "Abs");
}

#[test]
fn subtype_verdicts() {
    assert_eq!(cli(&["subtype", "A & B", "A"]).code, 0);
    assert_eq!(cli(&["subtype", "A -> B & C", "(A -> B) & (A -> C)"]).code, 0);
    assert_eq!(cli(&["subtype", "A", "A & B"]).code, 1);
    assert_eq!(cli(&["subtype", "A ->", "A"]).code, 2);
}

#[test]
fn witness_for_theta_sum_goal() {
    let out = cli(&["witness", "--corpus", "ThetaSum", "--goal", "y", "--bag-bound", "3", "--fuel", "2000"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("3 support terms reducing to y"), "{}", out.stdout);
    let out = cli(&["witness", "--corpus", "Omega", "--format", "json"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["kind"], "loop");
    assert_eq!(cli(&["witness", "--corpus", "I"]).code, 1);
}
