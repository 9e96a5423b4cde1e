// SPDX-License-Identifier: MIT
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use mpdagkit::fixtures::{graph, FIG1_MPDAG};
use mpdagkit::parse_graph;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpdagkit")).args(args).output().unwrap()
}

fn run_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpdagkit")).args(args).env(key, val).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn orient_inline_background() {
    let o = run(&["orient", &fixture("fig1_cpdag.g"), "--bg", "D -> B"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parse_graph(&stdout(&o)).unwrap(), graph(FIG1_MPDAG));
}

#[test]
fn orient_background_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# required\nD -> B").unwrap();
    let o = run(&["orient", &fixture("fig1_cpdag.g"), "--bg", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parse_graph(&stdout(&o)).unwrap(), graph(FIG1_MPDAG));
}

#[test]
fn orient_conflict_fails() {
    let o = run(&["orient", &fixture("fig3_g2.g"), "--bg", "X -> Y"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "FAIL: X -> Y conflicts with Y -> X\n");
}

#[test]
fn orient_conflict_from_earlier_requirement() {
    let o = run(&["orient", &fixture("fig1_cpdag.g"), "--bg", "D -> B; B -> D"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "FAIL: B -> D conflicts with D -> B\n");
    let o = run(&["orient", &fixture("fig1_cpdag.g"), "--bg", "A -> C"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL: A -> C"));
}

#[test]
fn adjust_list() {
    let o = run(&["adjust", &fixture("fig3_g1.g"), "--x", "X", "--y", "Y", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{}\n{V1}\n");
    let o = run(&["adjust", &fixture("fig3_g1.g"), "--x", "X", "--y", "Y", "--list", "--minimal"]);
    assert_eq!(stdout(&o), "{}\n");
}

#[test]
fn adjust_report_keys() {
    let o = run(&["adjust", &fixture("fig3_g1.g"), "--x", "X", "--y", "Y", "--z", "V1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let keys: Vec<&str> = text.lines().map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(keys, ["amenable", "forbidden_ok", "blocking_ok", "overall", "zero_effect", "witness"]);
    assert!(stdout(&o).contains("overall: true"));
    let o = run(&["adjust", &fixture("fig3_g2.g"), "--x", "X", "--y", "Y", "--z", ""]);
    assert!(stdout(&o).contains("overall: false") && stdout(&o).contains("zero_effect: true"));
}

#[test]
fn adjust_find() {
    let o = run(&["adjust", &fixture("fig3_g1.g"), "--x", "X", "--y", "Y", "--find"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "{V1}\n"));
    let o = run(&["adjust", &fixture("fig3_cpdag.g"), "--x", "X", "--y", "Y", "--find"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: no_adjustment_set:"));
}

#[test]
fn adjust_requires_a_mode() {
    let o = run(&["adjust", &fixture("fig3_g1.g"), "--x", "X", "--y", "Y"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn universe_cap_env() {
    let args = ["adjust", &fixture("fig3_g1.g"), "--x", "X", "--y", "Y", "--list"];
    let o = run_env(&args, "MPDAGKIT_UNIVERSE_CAP", "0");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: universe_cap:"));
    let o = run_env(&args, "MPDAGKIT_UNIVERSE_CAP", "lots");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reach_queries() {
    let o = run(&["possde", &fixture("fig1_mpdag.g"), "--x", "B"]);
    assert_eq!(stdout(&o), "{A,B,C}\n");
    let o = run(&["possde", &fixture("fig1_cpdag.g"), "--x", "B"]);
    assert_eq!(stdout(&o), "{A,B,C,D}\n");
    let o = run(&["possan", &fixture("fig1_mpdag.g"), "--x", "D"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with('{'));
}

#[test]
fn validate_reports() {
    let o = run(&["validate", &fixture("fig1_mpdag.g")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("valid: true\n"));
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "a -> b\nb -- c").unwrap();
    let o = run(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("closed: false"));
}

#[test]
fn parse_errors_exit_two() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "a -> b\na <- b").unwrap();
    let o = run(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).lines().count(), 1);
    assert!(stderr(&o).starts_with("error: syntax:"));
    let o = run(&["validate", "/nonexistent/graph.g"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["possde", &fixture("fig1_mpdag.g"), "--x", "Z"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: unknown_node:"));
}

fn chain_data() -> tempfile::NamedTempFile {
    // y = 2 x exactly, so every regression is exact
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "Y,X").unwrap();
    for i in 0..50 {
        let x = (i as f64 * 0.37).sin();
        writeln!(f, "{},{}", 2.0 * x, x).unwrap();
    }
    f
}

#[test]
fn ida_on_a_single_edge() {
    let mut g = tempfile::NamedTempFile::new().unwrap();
    writeln!(g, "X -> Y").unwrap();
    let data = chain_data();
    let o = run(&["ida", g.path().to_str().unwrap(), "--x", "X", "--y", "Y", "--data", data.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "{}\t2\n");
    let mut u = tempfile::NamedTempFile::new().unwrap();
    writeln!(u, "X -- Y").unwrap();
    let o = run(&["ida", u.path().to_str().unwrap(), "--x", "X", "--y", "Y", "--data", data.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "{}\t2\n{Y}\t0\n");
    let o = run(&[
        "ida",
        u.path().to_str().unwrap(),
        "--x",
        "X",
        "--y",
        "Y",
        "--data",
        data.path().to_str().unwrap(),
        "--unique",
    ]);
    assert_eq!(stdout(&o), "0\n2\n");
}

#[test]
fn ida_bad_data() {
    let mut g = tempfile::NamedTempFile::new().unwrap();
    writeln!(g, "X -> Y").unwrap();
    let mut d = tempfile::NamedTempFile::new().unwrap();
    writeln!(d, "X,Y\n1,oops").unwrap();
    let o = run(&["ida", g.path().to_str().unwrap(), "--x", "X", "--y", "Y", "--data", d.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: data:"));
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--seed", "7", "--p", "8", "--en", "3", "--graphs", "5", "--fractions", "0,0.5,1"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let b = run(&[&args[..], &["--sequential"]].concat());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("seed,p,en,fraction,amenable,identifiable,true_effect,n_tuples,n_unique,ms"));
    assert_eq!(lines.count(), 15);
}

#[test]
fn simulate_config_file_and_seed() {
    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    writeln!(cfg, "p = [6]\nen = [2.0]\ngraphs = 3\nn = 50\nfractions = [0.0, 1.0]").unwrap();
    let out = tempfile::NamedTempFile::new().unwrap();
    let o = run(&[
        "simulate",
        "--config",
        cfg.path().to_str().unwrap(),
        "--seed",
        "3",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(out.path()).unwrap();
    assert_eq!(text.lines().count(), 7);
    let o = run(&["simulate", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "seed = 3").unwrap();
    let o = run(&["simulate", "--config", bad.path().to_str().unwrap(), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: config:"));
}
