use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rectpack"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_validate_render() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let svg = dir.path().join("p.svg");
    let o = run(&["solve", "--instance", s(&data("micro.json")), "--out", s(&out), "--svg", s(&svg)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("profit=9"));
    let o = run(&["validate", "--instance", s(&data("micro.json")), "--packing", s(&out)]);
    assert_eq!(code(&o), 0);
    let o = run(&["render", "--instance", s(&data("micro.json")), "--packing", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, std::fs::read(&svg).unwrap());
}

#[test]
fn oracle_solver_and_strip_height() {
    let o = run(&["solve", "--instance", s(&data("micro.json")), "--solver", "oracle"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("profit=9"));
    let o = run(&["solve", "--instance", s(&data("strip.json")), "--solver", "oracle"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("height=3"));
}

#[test]
fn infeasible_packing_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"region":{"kind":"rect","w":10,"h":10},"placements":[{"id":0,"x":0,"y":0},{"id":1,"x":3,"y":3}]}"#,
    )
    .unwrap();
    let o = run(&["validate", "--instance", s(&data("micro.json")), "--packing", s(&bad)]);
    assert_eq!(code(&o), 2);
    let o = run(&["render", "--instance", s(&data("micro.json")), "--packing", s(&bad)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn parse_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.json");
    std::fs::write(&f, "{\"kind\": \"strip\",\n \"W\": 10,\n \"items\": [ {\"id\": 0, \"w\": } ]}").unwrap();
    let o = run(&["solve", "--instance", s(&f)]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("broken.json:3:"), "{err}");
}

#[test]
fn budget_exhaustion_exits_three() {
    let o = run(&["solve", "--instance", s(&data("micro.json")), "--solver", "oracle", "--budget", "5"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["solve"])), 1);
    let o = run(&["solve", "--instance", s(&data("strip.json")), "--solver", "lc"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn gen_round_trips_through_solve() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json");
    let o = run(&["gen", "--kind", "lpack", "--n", "5", "--side", "12", "--seed", "9", "--out", s(&f)]);
    assert_eq!(code(&o), 0);
    let o = run(&["solve", "--instance", s(&f)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let again = run(&["gen", "--kind", "lpack", "--n", "5", "--side", "12", "--seed", "9"]);
    assert_eq!(again.stdout, std::fs::read(&f).unwrap());
}

#[test]
fn bench_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let csv = dir.path().join(format!("run{k}.csv"));
        let svg = dir.path().join(format!("svg{k}"));
        let o = run(&["bench", "--spec", s(&data("bench.json")), "--seed", "5", "--out", s(&csv), "--svg", s(&svg)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&svg)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        outputs.push((std::fs::read_to_string(&csv).unwrap(), files));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = &outputs[0].0;
    assert!(csv.starts_with("# rectpack-bench v1\n"));
    assert_eq!(csv.lines().count(), 2 + 4 * 6);
    // micro.json: lc reaches the optimum 9 exactly.
    assert!(csv.lines().any(|l| l.starts_with("micro.json,knapsack,lc,profit,9,") && l.contains(",9,1,")));
    assert!(!outputs[0].1.is_empty());
}

#[test]
fn bench_spec_fuzz_seeds_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/parse_bench_spec");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let parsed = rectpack_cli::bench::parse_bench_spec(&std::fs::read_to_string(&path).unwrap());
        if path.ends_with("bench.json") {
            assert!(parsed.is_ok());
        }
        seen += 1;
    }
    assert!(seen > 0);
}
