//! End-to-end tests of the command-line interface: exit-code contract,
//! file formats, witnesses, and output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use cvxgeo::closure::format_family;
use cvxgeo::gallery::{counterexample_sharp, example_section5};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cvxgeo"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn cvxgeo")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("cvxgeo-test-{name}"));
    std::fs::write(&path, contents).expect("write temp file");
    path
}

const TRIANGLE_CENTROID: &str = "dim 2\np a 0 0\np b 3 0\np c 0 3\np m 1 1\n";

#[test]
fn realize_lists_closed_sets_canonically() {
    let path = write_temp("tri.points", TRIANGLE_CENTROID);
    let out = run(&["realize", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ground a b c m");
    assert_eq!(
        lines.len(),
        1 + 15,
        "triangle with centroid has 15 closed sets"
    );
    assert_eq!(lines[1], "closed");
    assert!(text.contains("closed a b c m"));
    assert!(
        !text.contains("closed a b c\n"),
        "the vertex triple is not closed"
    );
}

#[test]
fn realize_check_accepts_realizations() {
    let path = write_temp("tri-check.points", TRIANGLE_CENTROID);
    let out = run(&["realize", path.to_str().unwrap(), "--check"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("convex geometry: holds"));
}

#[test]
fn realize_reports_bad_rational_with_line_number() {
    let path = write_temp("bad.points", "dim 2\np a 1/0 0\n");
    let out = run(&["realize", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 2"), "error must name the line: {err}");
    assert!(err.contains("1/0"));
}

#[test]
fn rule_caratheodory_on_the_extension_family() {
    let (_, h) = example_section5();
    let path = write_temp("h5.family", &format_family(&h));
    // the bound is lost at n = 2 with the pinned witness
    let out = run(&[
        "rule",
        path.to_str().unwrap(),
        "--rule",
        "caratheodory",
        "-n",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stdout(&out).contains("fails at x=x, S={a,b,c,d}"),
        "got: {}",
        stdout(&out)
    );
    // with four-element witness sets the property holds
    let out = run(&[
        "rule",
        path.to_str().unwrap(),
        "--rule",
        "caratheodory",
        "-n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("3-caratheodory: holds"));
}

#[test]
fn rule_commands_on_the_sharp_family() {
    let fam = counterexample_sharp();
    let path = write_temp("sharp.family", &format_family(&fam));
    let out = run(&[
        "rule",
        path.to_str().unwrap(),
        "--rule",
        "carousel",
        "-n",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("2-carousel: holds"));
    let out = run(&["rule", path.to_str().unwrap(), "--rule", "sharp2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fails at X={x}, Y={y}, A={a}, B={b}, C={c}, P={}"));
    let out = run(&["rule", path.to_str().unwrap(), "--rule", "sharp-elem"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fails at x=x, y=y, a=a, b=b, c=c"));
}

#[test]
fn rule_requires_n_for_parameterized_rules() {
    let fam = counterexample_sharp();
    let path = write_temp("sharp-n.family", &format_family(&fam));
    let out = run(&["rule", path.to_str().unwrap(), "--rule", "carousel"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("requires -n"));
}

#[test]
fn rule_accepts_points_files_directly() {
    let path = write_temp("tri-rule.points", TRIANGLE_CENTROID);
    let out = run(&[
        "rule",
        path.to_str().unwrap(),
        "--rule",
        "caratheodory",
        "-n",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fails at x=m, S={a,b,c}"));
}

#[test]
fn realize_then_rule_round_trips() {
    let points = write_temp("roundtrip.points", TRIANGLE_CENTROID);
    let realized = run(&["realize", points.to_str().unwrap()]);
    assert_eq!(realized.status.code(), Some(0));
    let family_file = write_temp("roundtrip.family", &stdout(&realized));
    let via_family = run(&[
        "rule",
        family_file.to_str().unwrap(),
        "--rule",
        "carousel",
        "-n",
        "2",
    ]);
    let via_points = run(&[
        "rule",
        points.to_str().unwrap(),
        "--rule",
        "carousel",
        "-n",
        "2",
    ]);
    assert_eq!(via_family.status.code(), Some(0));
    assert_eq!(
        stdout(&via_family),
        stdout(&via_points),
        "pipelines must agree byte-for-byte"
    );
}

#[test]
fn embed_prints_map_or_none() {
    let (g, h) = example_section5();
    let g_path = write_temp("embed-g.family", &format_family(&g));
    let h_path = write_temp("embed-h.family", &format_family(&h));
    let out = run(&["embed", g_path.to_str().unwrap(), h_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().count() >= g.len());
    assert!(text.contains("{} -> {}"));
    // reverse direction: the larger family cannot inject into the smaller
    let out = run(&["embed", h_path.to_str().unwrap(), g_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "none");
}

#[test]
fn embed_count_all_reports_total() {
    let chain = "ground a b\nclosed\nclosed a\nclosed a b\n";
    let cube = "ground x y\nclosed\nclosed x\nclosed y\nclosed x y\n";
    let g_path = write_temp("count-g.family", chain);
    let h_path = write_temp("count-h.family", cube);
    let out = run(&[
        "embed",
        g_path.to_str().unwrap(),
        h_path.to_str().unwrap(),
        "--count-all",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // 3-chains in the 4-element boolean lattice: 0<a<ab, 0<b<ab
    assert!(text.contains("embeddings: 2"), "got: {text}");
}

#[test]
fn paper_single_item_and_unknown_item() {
    let out = run(&["paper", "--item", "extension"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS  extension"));
    assert!(text.contains("failed: 0"));
    assert!(!text.contains("FAIL "));
    let out = run(&["paper", "--item", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown gallery item"));
}

#[test]
fn search_is_deterministic_and_conclusive_at_ground_three() {
    let args = [
        "search",
        "--max-ground",
        "3",
        "--seed",
        "1",
        "--budget",
        "48",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    assert!(text.contains("unrealized (inconclusive): 0"));
    assert!(text.contains("candidates examined: 26"));
    let second = run(&args);
    assert_eq!(
        stdout(&second),
        text,
        "same seed must reproduce the report byte-for-byte"
    );
}

#[test]
fn export_dot_of_the_extension_lattice() {
    let (_, h) = example_section5();
    let path = write_temp("dot-h.family", &format_family(&h));
    let out = run(&["export-dot", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.matches("label=").count(),
        31,
        "31 closed sets, 31 nodes"
    );
    assert!(text.starts_with("digraph lattice {"));
}

#[test]
fn thread_cap_env_var() {
    let fam = counterexample_sharp();
    let path = write_temp("threads.family", &format_family(&fam));
    let out = bin()
        .env("CVXGEO_THREADS", "1")
        .args(["rule", path.to_str().unwrap(), "--rule", "sharp2"])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(1)); // verdict unchanged under the cap
    let out = bin()
        .env("CVXGEO_THREADS", "zero")
        .args(["rule", path.to_str().unwrap(), "--rule", "sharp2"])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("CVXGEO_THREADS"));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&["realize", "/nonexistent/nowhere.points"]);
    assert_eq!(out.status.code(), Some(2));
}
