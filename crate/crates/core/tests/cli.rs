mod common;

use std::fs;

use common::{command_matrix, data_dir, golden_dir, run_case};
use shiftzeta::cli::dispatch;

fn path(name: &str) -> String {
    data_dir().join(name).to_string_lossy().into_owned()
}

/// Set `SHIFTZETA_BLESS=1` to rewrite the golden files.
#[test]
fn golden_reports() {
    let bless = std::env::var_os("SHIFTZETA_BLESS").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in command_matrix() {
        let actual = run_case(&args);
        let target = golden_dir().join(&name);
        if bless {
            fs::write(&target, &actual).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&target).unwrap_or_else(|_| panic!("missing golden file {name}"));
        if expected != actual {
            mismatched.push(name);
        }
    }
    assert!(mismatched.is_empty(), "golden mismatches: {mismatched:?}");
}

#[test]
fn zeta_of_golden_mean() {
    let out = dispatch(["shiftzeta", "zeta", &path("golden.sft"), "--order", "4"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("1 / (1 - t - t^2)"));
    assert!(out.stdout.contains("series: 1, 1, 2, 3, 5\n"));
}

#[test]
fn points_table_for_the_f4_example() {
    let out = dispatch(["shiftzeta", "points", &path("f4_cycle.dsys"), "--max-n", "4", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let rows: Vec<(u64, u64, u64, bool)> = report["result"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["n"].as_u64().unwrap(), r["direct"].as_u64().unwrap(), r["matrix"].as_u64().unwrap(), r["match"].as_bool().unwrap()))
        .collect();
    assert_eq!(rows, [(1, 2, 2, true), (2, 0, 0, true), (3, 2, 2, true), (4, 0, 0, true)]);
    assert_eq!(report["command"], "points");
    assert_eq!(report["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let short = write("short.sft", "sft matrix\n2\n1 1");
    let out = dispatch(["shiftzeta", "zeta", &short]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("SyntaxError: line 3"), "{}", out.stderr);

    let composite = write("bad.dsys", "p 4\ne 1\nvertex x\nedge y");
    let out = dispatch(["shiftzeta", "points", &composite]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("NotPrime"), "{}", out.stderr);

    let no_vertex = write("novertex.dsys", "p 2\nedge y");
    assert_eq!(dispatch(["shiftzeta", "points", &no_vertex]).code, 2);

    let acyclic = write("chain.sft", "sft edges\nstates: a b\na b");
    let out = dispatch(["shiftzeta", "entropy", &acyclic]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error: NoCycle:"), "{}", out.stderr);

    let out = dispatch(["shiftzeta", "twisted-zeta", &path("golden.sft")]);
    assert_eq!(out.code, 2);
    let out = dispatch(["shiftzeta", "twisted-zeta", &path("golden.sft"), "--order", "x"]);
    assert_eq!(out.code, 2);
    let out = dispatch(["shiftzeta", "from-sft", &path("chain.sft"), "--p", "2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("AlphabetTooLarge"), "{}", out.stderr);
    assert_eq!(dispatch(["shiftzeta", "entropy", &path("golden.sft"), "--tol", "-1"]).code, 2);
    assert_eq!(dispatch(["shiftzeta", "points", &path("golden.sft")]).code, 2);
}

#[test]
fn from_sft_round_trips_through_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = dispatch(["shiftzeta", "from-sft", &path("golden.sft"), "--p", "5"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let target = dir.path().join("golden.dsys");
    fs::write(&target, &out.stdout).unwrap();
    let zeta = dispatch(["shiftzeta", "zeta", target.to_str().unwrap(), "--order", "4"]);
    assert!(zeta.stdout.contains("1 / (1 - t - t^2)"), "{}", zeta.stdout);
}

#[test]
fn scan_limit_is_enforced() {
    let out = dispatch(["shiftzeta", "points", &path("f8_frobenius.dsys"), "--scan-limit", "4"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("ScanLimitExceeded"), "{}", out.stderr);
}
