use std::path::Path;
use std::process::Command;

use bridge_loe_cli::{run, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bridge-loe"))
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, String) {
    let out = dir.join(name);
    let mut argv = vec!["bridge-loe"];
    argv.extend_from_slice(args);
    let out_s = out.to_str().unwrap().to_owned();
    argv.extend_from_slice(&["--output", &out_s]);
    let code = run(argv);
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    (code, text)
}

fn parse_csv(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn maxheight_table_for_one_bridge() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), "t.csv", &["cdf", "--kind", "maxheight", "--n", "1", "--grid", "0.25:3:12", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(text.lines().next(), Some("arg,prob"));
    let rows = parse_csv(&text);
    assert_eq!(rows.len(), 12);
    let at_one = rows.iter().find(|r| r[0] == 1.0).expect("grid contains m = 1");
    assert!((at_one[1] - (1.0 - (-2.0f64).exp())).abs() < 1e-12);
    // 17 significant digits
    let first = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    let mantissa = first.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn loe_table_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), "t.csv", &["cdf", "--kind", "loe", "--n", "1", "--grid", "0:10:21"]);
    assert_eq!(code, EXIT_OK);
    for r in parse_csv(&text) {
        assert!((r[1] - (1.0 - (-r[0] / 2.0).exp())).abs() < 1e-12);
    }
}

#[test]
fn json_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), "v.json", &["verify", "--n-max", "2", "--r", "0.5,1", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["checks", "pass", "seed", "suite"]);
    assert_eq!(v["pass"], true);
    assert!(v["seed"].is_u64());
    for c in v["checks"].as_array().unwrap() {
        let mut ck: Vec<&str> = c.as_object().unwrap().keys().map(String::as_str).collect();
        ck.sort_unstable();
        assert_eq!(ck, ["anchor", "max_err", "name", "pass", "tol"]);
        assert!(!c["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn verify_reports_ill_conditioned_resolvent_checks() {
    // The finite-difference resolvent check cannot meet its tolerance where
    // (I − H̃²)⁻¹ is badly conditioned; the suite says so and exits 1.
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), "v.json", &["verify", "--n-max", "8", "--r", "0.5,1,2", "--format", "json"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["pass"], false);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|n| n.starts_with("resolvent-derivative")), "{failed:?}");
}

#[test]
fn mc_loe_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["mc-loe", "--n", "1", "--samples", "10000", "--seed", "7", "--ks-threshold", "0.02"];
    let (c1, a) = run_to(dir.path(), "a.json", &args);
    let (c2, b) = run_to(dir.path(), "b.json", &args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 7);
    assert!(v["checks"][0]["max_err"].as_f64().unwrap() < 0.02);
}

#[test]
fn mc_loe_fails_a_tight_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run_to(dir.path(), "a.csv", &["mc-loe", "--n", "2", "--samples", "100", "--ks-threshold", "0.0001", "--format", "csv"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
}

#[test]
fn mc_bridges_output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["mc-bridges", "--n", "2", "--samples", "300", "--k", "64", "--s-max", "3", "--seed", "0x11", "--ks-threshold", "1"];
    let mut outputs = Vec::new();
    for threads in [None, Some("1"), Some("3")] {
        let out = dir.path().join(format!("b{}.json", outputs.len()));
        let mut cmd = bin();
        cmd.args(args).arg("--output").arg(&out);
        match threads {
            Some(t) => cmd.env("BRIDGE_LOE_THREADS", t),
            None => cmd.env_remove("BRIDGE_LOE_THREADS"),
        };
        let status = cmd.status().unwrap();
        assert_eq!(status.code(), Some(EXIT_OK));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let v: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
    assert_eq!(v["seed"], 0x11);
}

#[test]
fn tw_limit_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(dir.path(), "tw.csv", &["tw-limit", "--n", "8,16", "--grid", "-4:2:7"]);
    assert_eq!(code, EXIT_OK);
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
    for (b, n) in blocks.iter().zip([8, 16]) {
        let mut lines = b.lines();
        assert_eq!(lines.next(), Some(format!("# N={n}").as_str()));
        assert_eq!(lines.next(), Some("s,G_N,F_GOE,abs_err"));
        let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
        assert_eq!(rows.len(), 7);
        for r in rows {
            assert_eq!(r[3], (r[1] - r[2]).abs());
        }
    }
}

#[test]
fn misuse_exits_two() {
    let cases: &[&[&str]] = &[
        &["bridge-loe"],
        &["bridge-loe", "frobnicate"],
        &["bridge-loe", "cdf", "--kind", "loe", "--n", "1", "--grid", "1:2:1"],
        &["bridge-loe", "cdf", "--kind", "loe", "--n", "1", "--grid", "2:1:5"],
        &["bridge-loe", "cdf", "--kind", "loe", "--n", "0", "--grid", "0:1:5"],
        &["bridge-loe", "mc-loe", "--n", "1", "--samples", "9"],
        &["bridge-loe", "mc-loe", "--n", "1", "--ks-threshold", "0"],
        &["bridge-loe", "verify", "--n-max", "17"],
        &["bridge-loe", "tw-limit", "--n", "2"],
    ];
    for argv in cases {
        assert_eq!(run(argv.iter().copied()), EXIT_USAGE, "{argv:?}");
    }
}

#[test]
fn bad_thread_variable_exits_two() {
    let status = bin()
        .args(["cdf", "--kind", "loe", "--n", "1", "--grid", "0:1:2"])
        .env("BRIDGE_LOE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_USAGE));
}

#[test]
fn unwritable_output_exits_two_and_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/t.csv");
    let code = run(["bridge-loe", "cdf", "--kind", "loe", "--n", "1", "--grid", "0:1:2", "--output", missing.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    // a successful run leaves exactly the target file behind
    let (code, _) = run_to(dir.path(), "ok.csv", &["cdf", "--kind", "loe", "--n", "1", "--grid", "0:1:2"]);
    assert_eq!(code, EXIT_OK);
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names, ["ok.csv"]);
}

#[test]
fn stdout_output() {
    let out = bin().args(["cdf", "--kind", "maxheight", "--n", "2", "--grid", "0.5:1:3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
}
