use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn tts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tts")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn star_files(dir: &TempDir) -> (String, String) {
    let g = write(dir, "g.txt", "c l1\nc l2\nc l3\n");
    let s = write(dir, "s.txt", "0: c\n1: c\n2:\n");
    (g, s)
}

#[test]
fn verify_accepts_the_star_schedule() {
    let dir = TempDir::new().unwrap();
    let (g, s) = star_files(&dir);
    let o = tts(&["verify", "--graph", &g, "--schedule", &s]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "TTS size=2\n");
}

#[test]
fn verify_rejects_with_exit_one() {
    let dir = TempDir::new().unwrap();
    let (g, _) = star_files(&dir);
    let s = write(&dir, "bad.txt", "0: c\n1:\n");
    let o = tts(&["verify", "--graph", &g, "--schedule", &s]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("step 1"));
}

#[test]
fn io_and_usage_errors_exit_two() {
    assert_eq!(tts(&["verify", "--graph", "/no/such/file", "--schedule", "x"]).status.code(), Some(2));
    assert_eq!(tts(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tts(&["bounds", "--graph", "g", "--rule", "majority"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "a b\nb\n");
    assert_eq!(tts(&["greedy", "--graph", &g]).status.code(), Some(2));
}

#[test]
fn bad_threshold_file_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let (g, _) = star_files(&dir);
    let t = write(&dir, "t.txt", "c 1\nl1 2\nl2 1\nl3 1\n");
    let o = tts(&["greedy", "--graph", &g, "--rule", &format!("file:{t}")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exact_refuses_large_graphs() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("er.txt");
    let g = g.to_str().unwrap();
    assert!(tts(&["gen", "er", "--n", "25", "--seed", "2", "--out", g]).status.success());
    let o = tts(&["exact", "--graph", g]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
    assert!(tts(&["exact", "--graph", g, "--node-cap", "10"]).status.code() == Some(1));
}

#[test]
fn ilp_export_counts_star_variables() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("star.txt");
    let g = g.to_str().unwrap();
    assert!(tts(&["gen", "star", "--n", "10", "--out", g]).status.success());
    let lp = dir.path().join("m.lp");
    let o = tts(&["ilp-export", "--graph", g, "--k", "3", "--out", lp.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("variables=80 "));
    let text = fs::read_to_string(&lp).unwrap();
    assert!(text.contains("Binaries") || text.contains("Binary"));
}

#[test]
fn gen_writes_header_and_is_deterministic() {
    let a = stdout(&tts(&["gen", "ba", "--n", "12", "--m-attach", "2", "--seed", "5"]));
    let b = stdout(&tts(&["gen", "ba", "--n", "12", "--m-attach", "2", "--seed", "5"]));
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("# generator ba n=12 m_attach=2 seed=5"));
    assert_eq!(lines.next(), Some("# nodes 12"));
    assert_ne!(a, stdout(&tts(&["gen", "ba", "--n", "12", "--m-attach", "2", "--seed", "6"])));
}

/// Parses `i: labels` lines of a solver's stdout back into a schedule file
/// and checks it with `verify`.
fn reverify(dir: &TempDir, graph: &str, out: &str, size: usize) {
    let sched: String = out.lines().filter(|l| l.contains(':')).map(|l| format!("{l}\n")).collect();
    let s = write(dir, "round.txt", &sched);
    let o = tts(&["verify", "--graph", graph, "--schedule", &s]);
    assert_eq!(stdout(&o), format!("TTS size={size}\n"), "{out}");
}

#[test]
fn printed_schedules_verify() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("tree.txt");
    let g = g.to_str().unwrap();
    assert!(tts(&["gen", "tree", "--n", "14", "--seed", "9", "--out", g]).status.success());

    let exact = stdout(&tts(&["exact", "--graph", g]));
    let size: usize = exact.lines().last().unwrap().trim_start_matches("TTS size=").parse().unwrap();
    reverify(&dir, g, &exact, size);

    let tree = stdout(&tts(&["tree", "--graph", g, "--schedule"]));
    assert!(tree.ends_with(&format!("TTS size={size}\n")));
    reverify(&dir, g, &tree, size);
    assert_eq!(stdout(&tts(&["tree", "--graph", g])), format!("TTS size={size}\n"));

    let greedy = stdout(&tts(&["greedy", "--graph", g]));
    let gsize: usize = greedy.lines().last().unwrap().trim_start_matches("TTS size=").parse().unwrap();
    assert!(gsize >= size);
    reverify(&dir, g, &greedy, gsize);
}

#[test]
fn bounds_on_a_star() {
    let dir = TempDir::new().unwrap();
    let (g, _) = star_files(&dir);
    let o = stdout(&tts(&["bounds", "--graph", &g]));
    assert!(o.contains("strict-majority: 2\n"));
    assert!(o.contains("even: not applicable"));
    assert!(o.ends_with("best: 2 (strict-majority)\n"));
}

#[test]
fn simulate_reports_the_orbit() {
    let dir = TempDir::new().unwrap();
    let (g, _) = star_files(&dir);
    let o = stdout(&tts(&["simulate", "--graph", &g, "--init", "c", "--trace"]));
    assert_eq!(o, "0: c\n1: l1 l2 l3\n2: c\ntransient=0\ncycle=2\nall_positive=false\n");
    let o = stdout(&tts(&["simulate", "--graph", &g, "--init", "c", "--model", "progressive"]));
    assert!(o.contains("all_positive=true"));
}

#[test]
fn transforms_write_graph_and_thresholds() {
    let dir = TempDir::new().unwrap();
    let (g, _) = star_files(&dir);
    let og = dir.path().join("o.txt");
    let ot = dir.path().join("t.txt");
    let (og, ot) = (og.to_str().unwrap(), ot.to_str().unwrap());
    let o = tts(&["transform", "--graph", &g, "--double-cover", "--out-graph", og, "--out-tau", ot]);
    assert_eq!(stdout(&o), "nodes=8 edges=6\n");
    let rule = format!("file:{ot}");
    assert_eq!(stdout(&tts(&["exact", "--graph", og, "--rule", &rule])).lines().last(), Some("TTS size=4"));

    let o = tts(&["transform", "--graph", &g, "--hardness-gadget", "--out-graph", og, "--out-tau", ot]);
    assert_eq!(stdout(&o), "nodes=14 edges=18\n");
    assert_eq!(tts(&["transform", "--graph", &g, "--out-graph", og, "--out-tau", ot]).status.code(), Some(2));
}

#[test]
fn synthetic_csv_matches_golden() {
    let args = [
        "experiment",
        "synthetic",
        "--model",
        "BA",
        "--n",
        "8,12",
        "--instances",
        "4",
        "--seed",
        "11",
        "--avg-degree",
        "4",
        "--no-timing",
    ];
    let golden =
        fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/synthetic_ba.csv")).unwrap();
    assert_eq!(stdout(&tts(&args)), golden);
    let mut parallel = args.to_vec();
    parallel.extend(["--workers", "3"]);
    assert_eq!(stdout(&tts(&parallel)), golden);
}

#[test]
fn real_report_on_an_edge_list() {
    let dir = TempDir::new().unwrap();
    let (g, _) = star_files(&dir);
    let o = stdout(&tts(&["experiment", "real", "--edges", &g]));
    assert_eq!(o, "nodes=4 edges=3 tts_greedy=2 ts_greedy=3 improvement=33.3%\n");
}
