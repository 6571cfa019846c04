use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_reachavoid");

fn bundled() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/examples/plane_flight.json")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const TINY: &str = r#"{
    "states": ["s", "wall", "goal"],
    "actions": {"s": ["a", "b"], "wall": ["a"], "goal": ["stay"]},
    "kernel": {
        "s/a": [{"to": "goal", "weight": 1, "sojourn": {"kind": "uniform_ramp", "params": {"mu": 2}}}],
        "s/b": [{"to": "wall", "weight": 1, "sojourn": {"kind": "uniform_ramp", "params": {"mu": 2}}}],
        "wall/a": [{"to": "s", "weight": 1, "sojourn": {"kind": "uniform_ramp", "params": {"mu": 2}}}],
        "goal/stay": [{"to": "goal", "weight": 1, "sojourn": {"kind": "uniform_ramp", "params": {"mu": 1}}}]
    },
    "obstacles": {"kind": "fixed", "set": ["wall"]},
    "target": ["goal"],
    "horizon": 4
}"#;

fn write_model(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn validate_bundled_model() {
    let model = bundled();
    let o = run(&["validate", "--model", model.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "valid; δ=1, ε0=0.944444, K̃=19, β=0.978558\n");
}

#[test]
fn validate_reports_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let text = TINY.replace(r#""set": ["wall"]"#, r#""set": ["wall", "goal"]"#);
    let path = write_model(dir.path(), "overlap.json", &text);
    let o = run(&["validate", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("obstacle-target overlap"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn validate_names_missing_kernel_row() {
    let dir = tempfile::tempdir().unwrap();
    let text = TINY.replace(
        r#""s/b": [{"to": "wall", "weight": 1, "sojourn": {"kind": "uniform_ramp", "params": {"mu": 2}}}],"#,
        "",
    );
    let path = write_model(dir.path(), "missing.json", &text);
    let o = run(&["validate", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("(state s, action b)"), "{}", stderr(&o));
}

#[test]
fn malformed_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_model(dir.path(), "broken.json", "{\n  \"states\": [\"s\",\n}");
    let o = run(&["validate", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn unreadable_file_fails() {
    let o = run(&["validate", "--model", "/nonexistent/model.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_are_configuration_failures() {
    assert_eq!(
        run(&["solve", "--stop", "sometimes"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["solve", "--epsilon", "2"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn unseparated_delta_is_a_precondition_failure() {
    let o = run(&["solve", "--delta", "30"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("smaller"), "{}", stderr(&o));
}

#[test]
fn solve_writes_curves_policy_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("values.csv");
    let policy = dir.path().join("policy.json");
    let o = Command::new(BIN)
        .args(["solve", "--scenario", "b2", "--out"])
        .arg(&csv)
        .arg("--policy-out")
        .arg(&policy)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = stdout(&o);
    assert!(summary.contains("W(0,0,18) = 0.434440"), "{summary}");
    assert!(summary.contains("iterations "), "{summary}");
    assert!(
        !summary.contains("W(1,0,18)"),
        "obstacle states are not regular"
    );

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("state,t,value"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5 * 721);
    assert!(rows.iter().filter(|r| r[0] == "1").all(|r| r[2] == "0"));
    assert!(rows.iter().filter(|r| r[0] == "4").all(|r| r[2] == "1"));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&policy).unwrap()).unwrap();
    let layers = json["layers"].as_array().unwrap();
    assert!(!layers.is_empty());
    assert_eq!(layers[0]["0"], "beta");
    assert_eq!(layers[0]["3"], "alpha");
}

#[test]
fn zero_horizon_gives_zero_values() {
    let o = run(&["solve", "--scenario", "b1", "--horizon", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = stdout(&o);
    for x in 1..=3 {
        assert!(summary.contains(&format!("W({x},0,0) = 0\n")), "{summary}");
    }
}

#[test]
fn sweep_emits_curves_for_every_scenario() {
    let o = run(&["sweep", "--grid", "180"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("scenario,state,t,value"));
    let rows: Vec<(String, String, f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].into(),
                f[1].into(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows.len(), 3 * 5 * 181);
    let curve = |s: &str, x: &str| -> Vec<f64> {
        rows.iter()
            .filter(|r| r.0 == s && r.1 == x)
            .map(|r| r.3)
            .collect()
    };
    for s in ["b1", "b2", "b3"] {
        for x in ["0", "1", "2", "3"] {
            let c = curve(s, x);
            assert_eq!(c[0], 0.0);
            assert!(c.windows(2).all(|p| p[0] <= p[1]), "{s} {x}");
        }
    }
    assert!(curve("b3", "2").last() > curve("b2", "2").last());
}

#[test]
fn compare_passes_with_extracted_policy_and_is_repeatable() {
    let args = [
        "compare",
        "--scenario",
        "b1",
        "--episodes",
        "100000",
        "--seed",
        "3",
    ];
    let first = run(&args);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}{}",
        stdout(&first),
        stderr(&first)
    );
    assert_eq!(stdout(&first).matches(" pass").count(), 3);
    assert_eq!(run(&args).stdout, first.stdout);
}

#[test]
fn compare_flags_a_corrupted_policy() {
    let dir = tempfile::tempdir().unwrap();
    let policy = dir.path().join("policy.json");
    let o = Command::new(BIN)
        .args(["solve", "--scenario", "b1", "--policy-out"])
        .arg(&policy)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&policy).unwrap();
    let corrupted = text
        .replace("\"beta\"", "\"gamma\"")
        .replace("\"alpha\"", "\"gamma\"");
    std::fs::write(&policy, corrupted).unwrap();
    let o = Command::new(BIN)
        .args([
            "compare",
            "--scenario",
            "b1",
            "--episodes",
            "100000",
            "--policy",
        ])
        .arg(&policy)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));

    std::fs::write(&policy, text.replace("\"beta\"", "\"delta\"")).unwrap();
    let o = Command::new(BIN)
        .args(["compare", "--scenario", "b1", "--policy"])
        .arg(&policy)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("unknown action \"delta\""),
        "{}",
        stderr(&o)
    );
}

#[test]
fn compare_writes_episode_log() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.csv");
    let model = write_model(dir.path(), "tiny.json", TINY);
    let o = Command::new(BIN)
        .args([
            "compare",
            "--model",
            model.to_str().unwrap(),
            "--episodes",
            "500",
            "--log",
        ])
        .arg(&log)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&log).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("state,episode,outcome,jumps,final_time"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 500);
    // action `a` jumps straight to the goal within 2 time units
    assert!(rows.iter().all(|r| r.contains(",reached,1,")));
}
