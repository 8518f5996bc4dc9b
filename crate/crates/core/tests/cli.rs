use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn cubelin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubelin")).args(args).env_remove("CUBELIN_CEILING").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("cubelin-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, contents).unwrap();
        p.to_string_lossy().into_owned()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn verify_rank_two_example() {
    let o = cubelin(&["verify", "paper-example", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        json_out(&o),
        json!({"trace_condition_holds": true, "delta": 0, "rank": 2, "bound_times_two": 4, "theorem_satisfied": true})
    );
    let text = stdout(&cubelin(&["verify", "paper-example"]));
    assert!(text.contains("rank = 2"), "{text}");
    assert!(text.contains("(tight)"), "{text}");
}

#[test]
fn verify_non_trace_zero_is_vacuous() {
    let o = cubelin(&["verify", r#"[["1","0"],["0","1"]]"#]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("yes (vacuous)"));
}

#[test]
fn corollary_rank_two_example() {
    let o = cubelin(&["corollary", "paper-example", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json_out(&o);
    assert_eq!(v["outcome"], "verified");
    assert_eq!(v["verified"], true);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["g_inverse_degree"], 3);
    assert_eq!(v["f_inverse_degree"], 9);
    assert_eq!(v["intertwining_holds"], true);
}

#[test]
fn invert_zero_and_shear() {
    let o = cubelin(&["invert", "zero-3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["inverse"], json!(["x1", "x2", "x3"]));

    let o = cubelin(&["invert", "shear-2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("G1 = -x2^3 + x1"), "{}", stdout(&o));
}

#[test]
fn invert_non_keller_is_not_an_anomaly() {
    let o = cubelin(&["invert", r#"[["1"]]"#, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["status"], "NotInvertible");
}

#[test]
fn reduce_rank_two_example() {
    let o = cubelin(&["reduce", "paper-example", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["c"], json!([["1", "i", "0", "1"], ["0", "0", "1", "0"]]));
    assert_eq!(v["b"], json!([["1", "1"], ["-i", "-i"], ["-1", "1"], ["-1", "1"]]));
}

#[test]
fn example_round_trips_through_file() {
    let o = cubelin(&["example", "paper-example"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = TempDir::new("example");
    let path = dir.file("a.json", &stdout(&o));
    let v = cubelin(&["verify", &path, "--json"]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json_out(&v)["rank"], 2);
}

#[test]
fn search_small_alphabet() {
    let dir = TempDir::new("search");
    let cfg = dir.file(
        "cfg.json",
        r#"{"n":2,"alphabet":["0","1"],"mode":"enumerate","filters":["keller_only"],"checks":["invert","rank_bound"]}"#,
    );
    let o = cubelin(&["search", &cfg, "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json_out(&o);
    assert_eq!(v["totals"]["candidates"], 16);
    assert_eq!(v["totals"]["passed_filters"], 3);
    assert_eq!(v["totals"]["invertible"], 3);
    assert_eq!(v["anomalies"], json!([]));

    let o = cubelin(&["search", &cfg, "--records"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    for line in &lines[..3] {
        let r: Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["keller"], true);
        assert_eq!(r["anomaly"], false);
    }
}

#[test]
fn search_ceiling_refusal() {
    let dir = TempDir::new("ceiling");
    let cfg = dir.file("cfg.json", r#"{"n":3,"alphabet":["0","1","-1"],"mode":"enumerate"}"#);
    let o = Command::new(env!("CARGO_BIN_EXE_cubelin"))
        .args(["search", &cfg])
        .env("CUBELIN_CEILING", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("19683"), "{}", stderr(&o));
}

#[test]
fn input_errors_exit_one() {
    let o = cubelin(&["bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));

    let o = cubelin(&["verify", r#"[["1","2"],["3"]]"#]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("row 1"), "{}", stderr(&o));

    let o = cubelin(&["verify", r#"[["1","2x"],["3","4"]]"#]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("row 0, column 1"), "{}", stderr(&o));

    let o = cubelin(&["verify", r#"[["1","0","0"],["0","1","0"]]"#]);
    assert_eq!(o.status.code(), Some(1));

    let o = cubelin(&["verify", "no-such-file.json"]);
    assert_eq!(o.status.code(), Some(1));

    let o = cubelin(&["example", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("paper-example"));

    let big = format!("[{}]", vec![format!("[{}]", ["\"0\""; 10].join(",")); 10].join(","));
    let o = cubelin(&["corollary", &big]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(cubelin(&["--help"]).status.code(), Some(0));
    let o = cubelin(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(env!("CARGO_PKG_VERSION")));
}
