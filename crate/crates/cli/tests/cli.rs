use std::path::PathBuf;
use std::process::{Command, Output};

use isoball_cli::RunReport;
use serde_json::Value;

fn isoball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoball")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> RunReport {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad report ({e}): {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn appendix_passes() {
    let out = isoball(&["verify", "appendix"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert!(r.passed);
    assert_eq!(r.schema_version, 1);
    assert_eq!(r.verdicts["first"]["exact_match"], Value::Bool(true));
    assert_eq!(r.verdicts["second"]["rows"][6]["computed"], "2r^7 + 8r^6 + 12r^5 + 8r^4 + 2r^3");
}

#[test]
fn local_expansion_small_slice() {
    let out = isoball(&["verify", "local-expansion", "--n", "4", "--r", "2"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r.verdicts["examined"], "64");
    assert_eq!(r.verdicts["violations"], 0);
}

#[test]
fn oversized_slice_is_a_usage_error() {
    let out = isoball(&["verify", "nm", "--n", "99", "--r", "50"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("slice too large"));
}

#[test]
fn bad_flags_and_names() {
    assert_eq!(code(&isoball(&["construct", "bogus", "--n", "4"])), 2);
    assert_eq!(code(&isoball(&["verify", "nm", "--n", "four", "--r", "2"])), 2);
    assert_eq!(code(&isoball(&["verify", "interlace", "--r", "2"])), 2);
    assert_eq!(code(&isoball(&["construct", "star", "--n", "4"])), 2);
    assert_eq!(code(&isoball(&["bounds", "eval", "--which", "thm1", "--n", "6", "--R", "3", "--rho", "1/3", "--size", "21", "--boundary", "1"])), 2);
}

#[test]
fn min_boundary_matches_slice() {
    let out = isoball(&["search", "min-boundary", "--n", "4", "--size", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out).statistics["min_boundary"], "6");
}

#[test]
fn budget_exceeded_is_a_usage_error() {
    let out = isoball(&["search", "min-boundary", "--n", "5", "--size", "16", "--budget", "10"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn empty_sample() {
    let out = isoball(&["search", "sample", "--samples", "0"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r.verdicts["examined"], "0");
    assert_eq!(r.seed, Some(0));
}

#[test]
fn seeded_sample_is_reproducible_across_workers() {
    let args = ["search", "sample", "--bound", "thm1", "--n", "100", "--R", "50", "--rho", "0.25", "--samples", "200", "--seed", "7"];
    let one = isoball(&[&args[..], &["--workers", "1"]].concat());
    let four = isoball(&[&args[..], &["--workers", "4"]].concat());
    assert_eq!(code(&one), 0);
    let (a, b) = (report(&one), report(&four));
    assert_eq!(a.verdicts, b.verdicts);
    assert_eq!(a.verdicts["violations"], 0);
    assert_eq!(a.parameters["rho"], "1/4");
}

#[test]
fn constructions() {
    let out = isoball(&["construct", "slice-halfspace", "--n", "4", "--r", "2", "--k", "0"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r.verdicts["size"], "5");
    assert_eq!(r.verdicts["family"]["repr"], "profile");

    let out = isoball(&["construct", "ball-halfspace", "--n", "4", "--R", "2", "--k", "-3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out).verdicts["size"], "0");

    let out = isoball(&["construct", "sized-ball-halfspace", "--n", "10", "--R", "5", "--size", "300"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out).verdicts["size"], "300");
}

#[test]
fn bound_evaluations() {
    let out = isoball(&["bounds", "eval", "--which", "nm", "--n", "4", "--r", "2", "--size", "3"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!((r.verdicts["lower"].as_str(), r.verdicts["upper"].as_str()), (Some("2"), Some("2")));

    let out = isoball(&["bounds", "eval", "--which", "eq4", "--n", "6", "--r", "3", "--size", "10", "--boundary", "25"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r.verdicts["holds"], true);
    assert_eq!(r.verdicts["slack"]["rational"], "10");

    // the whole upper layer is not enough boundary for half of S_6(3)
    let out = isoball(&["bounds", "eval", "--which", "eq4", "--n", "6", "--r", "3", "--size", "10", "--boundary", "15"]);
    assert_eq!(code(&out), 1);
    assert!(!report(&out).passed);

    let out = isoball(&["bounds", "eval", "--which", "hypergeom", "--n", "10", "--r", "5"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn interlace_instance_and_grid() {
    let out = isoball(&["verify", "interlace", "--r", "2", "--s", "4", "--alpha", "2/5"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let x2: f64 = r.statistics["x2_minus"].parse().unwrap();
    let x1: f64 = r.statistics["x1_plus"].parse().unwrap();
    assert!((x2 - 0.2821).abs() < 1e-3 && (x1 - 0.3664).abs() < 1e-3);

    let out = isoball(&["verify", "interlace", "--grid", "8", "--workers", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out).verdicts["inconclusive"], 0);
}

#[test]
fn reports_round_trip_and_go_to_files() {
    let path = scratch("lemma6.json");
    let csv = scratch("lemma6.csv");
    let out = isoball(&["verify", "lemma6", "--n", "10", "--out", path.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let r: RunReport = serde_json::from_str(&text).unwrap();
    let again: RunReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(r, again);

    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("n,r,size,ball,ratio,ratio_decimal,monotone_step,slice_bound"));
    // n = 1..=10 with r = 0..=n
    assert_eq!(lines.count(), (2..=11).sum::<usize>());
    assert!(table.contains("\n4,2,6,11,6/11,0.545454545454545,true,true\n"), "{table}");
}

#[test]
fn prop9_csv() {
    let csv = scratch("prop9.csv");
    let out = isoball(&["verify", "prop9", "--n", "12", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("n,r,size,max_ratio,max_ratio_decimal\n"));
    assert!(table.contains("\n2,1,2,1/8,0.125\n"), "{table}");
}

#[test]
fn verdicts_are_deterministic() {
    let a = report(&isoball(&["search", "local", "--n", "8", "--R", "4", "--size", "40", "--seed", "3", "--steps", "500"]));
    let b = report(&isoball(&["search", "local", "--n", "8", "--R", "4", "--size", "40", "--seed", "3", "--steps", "500"]));
    assert_eq!(a.verdicts, b.verdicts);
    assert_eq!(a.seed, Some(3));
}
