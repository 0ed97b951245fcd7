use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bdspanner::io::graph_from_json;
use tempfile::TempDir;

fn bdspanner(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bdspanner"))
        .args(args)
        .current_dir(dir)
        .env_remove("BDSPANNER_TOLERANCE")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = bdspanner(dir.path(), &["gen", "--kind", "grid-jitter", "-n", "50", "--seed", "9"]);
    let b = bdspanner(dir.path(), &["gen", "--kind", "grid-jitter", "-n", "50", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 51);
}

#[test]
fn build_both_writes_identical_artifacts() {
    let dir = TempDir::new().unwrap();
    let args = |tag: &str| {
        vec![
            "build".to_string(),
            "-n".into(),
            "200".into(),
            "--seed".into(),
            "4".into(),
            "--algorithm".into(),
            "both".into(),
            "--schedule-seed".into(),
            "1".into(),
            "--schedule-seed".into(),
            "77".into(),
            "--graph".into(),
            format!("g{tag}.json"),
            "--report".into(),
            format!("r{tag}.json"),
            "--svg".into(),
            format!("s{tag}.svg"),
        ]
    };
    for tag in ["1", "2"] {
        let a: Vec<String> = args(tag);
        let o = bdspanner(dir.path(), &a.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).contains("identity"));
    }
    for (a, b) in [("g1.json", "g2.json"), ("r1.json", "r2.json"), ("s1.svg", "s2.svg")] {
        assert_eq!(fs::read(dir.path().join(a)).unwrap(), fs::read(dir.path().join(b)).unwrap(), "{a}");
    }

    let (g, prov) = graph_from_json(&fs::read_to_string(dir.path().join("g1.json")).unwrap()).unwrap();
    assert_eq!(prov.algorithm, "both");
    assert_eq!(prov.schedule_seeds, vec![1, 77]);
    assert!(g.max_degree() <= 7);
    let svg = fs::read_to_string(dir.path().join("s1.svg")).unwrap();
    assert_eq!(svg.matches("<line").count(), g.edges().len());
    assert_eq!(svg.matches("<circle").count(), 200);

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r1.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], "bdspanner.report/1");
    assert_eq!(report["pass"], true);
    assert!(report["max_degree"].as_u64().unwrap() <= 7);
}

#[test]
fn verify_and_render_read_graph_files() {
    let dir = TempDir::new().unwrap();
    let pts = "x,y\n0,0\n4,0\n1,2\n3,3\n";
    fs::write(dir.path().join("pts.csv"), pts).unwrap();
    assert_eq!(code(&bdspanner(dir.path(), &["build", "-i", "pts.csv", "--svg", "a.svg"])), 0);
    let v = bdspanner(dir.path(), &["verify", "graph.json", "--lemma-trials", "50"]);
    assert_eq!(code(&v), 0);
    let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(report["vertices"], 4);
    assert_eq!(report["lemma_suite"].as_array().unwrap().len(), 10);
    assert_eq!(code(&bdspanner(dir.path(), &["render", "graph.json", "-o", "b.svg"])), 0);
    assert_eq!(fs::read(dir.path().join("a.svg")).unwrap(), fs::read(dir.path().join("b.svg")).unwrap());
}

#[test]
fn tampered_graph_fails_verification() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&bdspanner(dir.path(), &["build", "-n", "30", "--seed", "1"])), 0);
    let path = dir.path().join("graph.json");
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    // a single edge leaves most vertices unreachable
    let first = doc["core_edges"][0].clone();
    doc["core_edges"] = serde_json::json!([first]);
    doc["wedge_edges"] = serde_json::json!([]);
    fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = bdspanner(dir.path(), &["verify", "graph.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("verification failed"));
}

#[test]
fn degree_counterexample_exits_with_verification_failure() {
    let dir = TempDir::new().unwrap();
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures/degree8.csv");
    let o = bdspanner(dir.path(), &["build", "-i", fixture]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("vertex 1 has degree 8"));
}

#[test]
fn input_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("one.csv"), "1,2\n").unwrap();
    fs::write(dir.path().join("dup.csv"), "0,0\n1,1\n0,0\n").unwrap();
    fs::write(dir.path().join("bad.csv"), "0,0\n1,x\n").unwrap();
    for args in [
        &["build", "-i", "one.csv"][..],
        &["build", "-i", "dup.csv"],
        &["build", "-i", "bad.csv"],
        &["build", "-i", "missing.csv"],
        &["build"],
        &["gen", "-n", "1"],
        &["verify", "missing.json"],
        &["build", "-n", "5", "--kind", "hexagonal"],
        &["no-such-command"],
    ] {
        assert_eq!(code(&bdspanner(dir.path(), args)), 3, "{args:?}");
    }
}

#[test]
fn tolerance_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bdspanner"))
        .args(["build", "-n", "20"])
        .current_dir(dir.path())
        .env("BDSPANNER_TOLERANCE", "0.001")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["tolerance"], 0.001);
}

#[test]
fn bench_on_two_points() {
    let dir = TempDir::new().unwrap();
    let o = bdspanner(dir.path(), &["bench", "--sizes", "2,64", "--reps", "1", "--json", "b.json"]);
    assert_eq!(code(&o), 0);
    let rows: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    let first = &rows[0];
    assert_eq!(first["n"], 2);
    assert!(first["dt_ms"].as_f64().unwrap() > 0.0);
    assert!(first["seq_ms"].as_f64().unwrap() > 0.0);
    assert_eq!(first["pops"], 2);
}
