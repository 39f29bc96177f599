use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn tvrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvrt")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn tv_sphere_at_level_three() {
    let o = tvrt(&["tv", "--level", "3", "--tri", &path("S3_2tet.tri")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("Z = 1/2") && out.contains("numeric = 0.5"), "{out}");
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = tvrt(&["tv", "--level", "4", "--tri", "missing.tri"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.tri"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(tvrt(&["tv", "--level", "2", "--tri", "x"]).status.code(), Some(2));
    assert_eq!(tvrt(&["tv", "--tri", &path("L3_1.tri"), "--threads", "0"]).status.code(), Some(2));
    assert_eq!(tvrt(&["tv", "--tri", &path("L3_1.tri"), "--method", "magic"]).status.code(), Some(2));
    assert_eq!(tvrt(&["verify", "--suite", "--tri", &path("L3_1.tri")]).status.code(), Some(2));
    assert_eq!(tvrt(&["verify", "--tri", &path("L3_1.tri")]).status.code(), Some(2));
    assert_eq!(tvrt(&["tv", "--level", "61", "--tri", &path("L3_1.tri")]).status.code(), Some(2));
}

#[test]
fn malformed_input_names_the_problem() {
    let dir = std::env::temp_dir().join(format!("tvrt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.lnk");
    std::fs::write(&bad, r#"{"format":"lnk-v1","components":1,"pd":[[1,2,3,4]],"framings":[0]}"#).unwrap();
    let o = tvrt(&["rt", "--link", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("arc 1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ceiling_exit_code() {
    let o = tvrt(&["tv", "--level", "8", "--tri", &path("L2_1#L2_1.tri"), "--method", "brute", "--ceiling", "1000"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_suite_passes() {
    let o = tvrt(&["verify", "--level", "4", "--suite"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 6, "{out}");
}

#[test]
fn verify_single_pair_and_homology_mismatch() {
    let o = tvrt(&["verify", "--level", "5", "--tri", &path("L3_1.tri"), "--link", &path("L3_1.lnk")]);
    assert_eq!(o.status.code(), Some(0));
    let o = tvrt(&["verify", "--level", "5", "--tri", &path("L4_1.tri"), "--link", &path("L4_1_hopf.lnk")]);
    assert_eq!(o.status.code(), Some(0));
    let o = tvrt(&["verify", "--level", "5", "--tri", &path("L3_1.tri"), "--link", &path("L4_1.lnk")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_is_deterministic_and_methods_agree() {
    for name in ["S3_2tet.tri", "L3_1.tri", "S2xS1.tri", "L4_1.tri"] {
        let run = |method: &str, threads: &str| {
            let o = tvrt(&["tv", "--level", "4", "--json", "--tri", &path(name), "--method", method, "--threads", threads]);
            assert_eq!(o.status.code(), Some(0));
            stdout(&o)
        };
        let a = run("pruned", "1");
        assert_eq!(a, run("pruned", "4"));
        let mut brute: serde_json::Value = serde_json::from_str(&run("brute", "2")).unwrap();
        let mut pruned: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(pruned["method"], "pruned");
        brute["method"] = "-".into();
        pruned["method"] = "-".into();
        assert_eq!(brute, pruned, "{name}");
    }
}

#[test]
fn rt_and_data_json() {
    let o = tvrt(&["rt", "--level", "5", "--json", "--link", &path("S2xS1.lnk")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["modulus_squared"]["text"], "1");
    assert_eq!(v["invariant"]["omega_power"], -2);

    let o = tvrt(&["data", "--level", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["global_dimension"]["text"], "2");
    assert_eq!(v["colors"].as_array().unwrap().len(), 2);
}

#[test]
fn selftest_small() {
    let o = tvrt(&["selftest", "--max-level", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
