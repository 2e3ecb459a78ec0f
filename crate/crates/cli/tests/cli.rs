use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pcg_core::format::{parse_graph, parse_model, parse_witness, write_graph};
use pcg_core::geometry::{model_graph, paper_model, GeometricModel, PAPER_MODELS};
use pcg_core::graph::{graph_h, Graph};
use pcg_core::tree::pcg_eval;
use pcg_core::Rational;
use tempfile::TempDir;

fn pcg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcg"))
        .args(args)
        .env_remove("PCG_JOBS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const EXAMPLE_TT: &str = "ttgraph\nnode a g=1 t=2\nnode b g=1 t=5\nnode c g=3 t=5\n";

#[test]
fn tt_witness_example_bounds() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "in.tt", EXAMPLE_TT);
    let output = dir.path().join("w.txt");
    let out = pcg(&["tt-witness", s(&input), s(&output)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "edges 2");
    let text = fs::read_to_string(&output).unwrap();
    assert!(text.contains("dmin 5/1\ndmax 11/1\n"));
    let w = parse_witness(&text).unwrap();
    let g = pcg_eval(&w);
    assert!(g.has_edge("a", "b") && g.has_edge("a", "c") && !g.has_edge("b", "c"));
}

#[test]
fn tt_witness_single_node() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "in.tt", "ttgraph\nnode solo g=2 t=3\n");
    let output = dir.path().join("w.txt");
    assert_eq!(code(&pcg(&["tt-witness", s(&input), s(&output)])), 0);
    let w = parse_witness(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(w.tree.leaves().len(), 1);
}

#[test]
fn tt_witness_accepts_threshold_files() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "in.tt", "threshold 3\nnode a a=1\nnode b a=2\nnode c a=0\n");
    let output = dir.path().join("w.txt");
    let out = pcg(&["tt-witness", s(&input), s(&output)]);
    assert_eq!(code(&out), 0);
    // a + b = 3 is the only pair reaching the threshold
    assert_eq!(stdout(&out).trim(), "edges 1");
}

#[test]
fn malformed_input_reports_position() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "bad.tt", "ttgraph\nnode a g=1 t=oops\n");
    let out = pcg(&["tt-witness", s(&input), s(&dir.path().join("w"))]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2, column"), "{}", stderr(&out));
}

#[test]
fn missing_file_is_io_error() {
    let dir = TempDir::new().unwrap();
    let out = pcg(&["eval", s(&dir.path().join("absent.txt"))]);
    assert_eq!(code(&out), 3);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(code(&pcg(&["frobnicate"])), 2);
    assert_eq!(code(&pcg(&[])), 2);
}

const UNIT_STAR: &str = "tree\ntnode c\ntnode a\ntnode b\ntnode d\nleaf a a\nleaf b b\nleaf d d\n\
tedge c a 1\ntedge c b 1\ntedge c d 1\n";

#[test]
fn eval_unit_star_is_triangle() {
    let dir = TempDir::new().unwrap();
    let w = file(&dir, "w.txt", &format!("{UNIT_STAR}dmin 2\ndmax 2\n"));
    let out = pcg(&["eval", s(&w)]);
    assert_eq!(code(&out), 0);
    let g = parse_graph(&stdout(&out)).unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (3, 3));
}

#[test]
fn eval_empty_interval_gives_empty_graph() {
    let dir = TempDir::new().unwrap();
    let w = file(&dir, "w.txt", &format!("{UNIT_STAR}dmin 3\ndmax 1\n"));
    let out = pcg(&["eval", s(&w)]);
    assert_eq!(code(&out), 0);
    let g = parse_graph(&stdout(&out)).unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (3, 0));
}

#[test]
fn eval_mlpg_matches_pcg_on_caterpillar() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "in.tt", EXAMPLE_TT);
    let w = dir.path().join("w.txt");
    assert_eq!(code(&pcg(&["tt-witness", s(&input), s(&w)])), 0);
    let pcg_mode = stdout(&pcg(&["eval", s(&w), "--mode", "pcg"]));
    let mlpg_mode = stdout(&pcg(&["eval", s(&w), "--mode", "mlpg"]));
    assert_eq!(pcg_mode, mlpg_mode);
    let dot = stdout(&pcg(&["eval", s(&w), "--dot"]));
    assert!(dot.starts_with("graph "));
}

#[test]
fn bundled_models_print_h() {
    for name in PAPER_MODELS {
        let out = pcg(&["model", "--bundled", name, "--check-h"]);
        assert_eq!(code(&out), 0, "{name}: {}", stderr(&out));
        assert_eq!(parse_graph(&stdout(&out)).unwrap(), graph_h(), "{name}");
    }
}

#[test]
fn emitted_models_round_trip() {
    let dir = TempDir::new().unwrap();
    for name in PAPER_MODELS {
        let path = dir.path().join(format!("{name}.model"));
        assert_eq!(code(&pcg(&["model", "--bundled", name, "--emit", s(&path)])), 0);
        let text = fs::read_to_string(&path).unwrap();
        let m = parse_model(&text).unwrap();
        let bundled: GeometricModel<Rational> = paper_model(name).unwrap();
        assert_eq!(m, bundled);
        let out = pcg(&["model", s(&path)]);
        assert_eq!(parse_graph(&stdout(&out)).unwrap(), model_graph(&bundled));
    }
}

#[test]
fn tampered_disks_mismatch() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("disks.model");
    assert_eq!(code(&pcg(&["model", "--bundled", "disks_h", "--emit", s(&path)])), 0);
    let text = fs::read_to_string(&path).unwrap();
    let tampered: String = text
        .lines()
        .map(|l| if l.starts_with("disk ") && l.ends_with(" 15/1") { l.replace(" 15/1", " 14/1") } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    assert_ne!(tampered.trim(), text.trim());
    let bad = file(&dir, "tampered.model", &tampered);
    let out = pcg(&["model", s(&bad), "--check-h"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("mismatch vs H"));
}

#[test]
fn disjoint_rects_and_svg() {
    let dir = TempDir::new().unwrap();
    let m = file(&dir, "r.model", "model 2d\nrect p 0 0 1 1\nrect q 2 2 3 3\n");
    let svg = dir.path().join("r.svg");
    let out = pcg(&["model", s(&m), "--svg", s(&svg)]);
    assert_eq!(code(&out), 0);
    assert_eq!(parse_graph(&stdout(&out)).unwrap().edge_count(), 0);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn mixed_dimensions_rejected() {
    let dir = TempDir::new().unwrap();
    let m = file(&dir, "m.model", "model 2d\nrect p 0 0 1 1\nbox q 0 0 0 1 1 1\n");
    assert_eq!(code(&pcg(&["model", s(&m)])), 2);
}

fn graph_file(dir: &TempDir, name: &str, g: &Graph) -> PathBuf {
    file(dir, name, &write_graph(g))
}

#[test]
fn recognize_small_graphs() {
    let dir = TempDir::new().unwrap();
    let k4 = Graph::complete(&["a", "b", "c", "d"]).unwrap();
    let p3 = Graph::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
    for (name, g) in [("k4", k4), ("p3", p3)] {
        let input = graph_file(&dir, name, &g);
        let w = dir.path().join(format!("{name}.w"));
        let out = pcg(&["recognize", s(&input), "-o", s(&w)]);
        assert_eq!(code(&out), 0, "{name}: {}", stderr(&out));
        let witness = parse_witness(&fs::read_to_string(&w).unwrap()).unwrap();
        assert_eq!(pcg_eval(&witness), g, "{name}");
    }
}

#[test]
fn recognize_guard() {
    let dir = TempDir::new().unwrap();
    let input = graph_file(&dir, "p2", &Graph::from_edges(&["a", "b"], &[("a", "b")]).unwrap());
    let out = pcg(&["recognize", s(&input)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn recognize_h_certificate() {
    let dir = TempDir::new().unwrap();
    let input = graph_file(&dir, "h", &graph_h());
    let out = pcg(&["recognize", s(&input), "--prune", "--jobs", "0", "--progress"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let cert = stdout(&out);
    assert!(cert.starts_with("not-pcg nodes=8 topologies=10395 labelings="), "{cert}");
    assert!(stderr(&out).contains("topologies 10395/10395"));

    let out = pcg(&["recognize", s(&input), "--symmetry", "--jobs", "0"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("not-pcg nodes=8 topologies=158 "), "{}", stdout(&out));
}

#[test]
fn iso_mapping_and_negative() {
    let dir = TempDir::new().unwrap();
    let g1 = Graph::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
    let g2 = Graph::from_edges(&["x", "y", "z"], &[("x", "z"), ("z", "y")]).unwrap();
    let g3 = Graph::complete(&["x", "y", "z"]).unwrap();
    let (f1, f2, f3) = (graph_file(&dir, "1", &g1), graph_file(&dir, "2", &g2), graph_file(&dir, "3", &g3));
    let out = pcg(&["iso", s(&f1), s(&f2)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("b -> z"));
    let out = pcg(&["iso", s(&f1), s(&f3)]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out).trim(), "non-isomorphic");
}

#[test]
fn verify_paper_default_run() {
    let out = pcg(&["verify-paper", "--instances", "50"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 7, "{text}");
    assert!(text.contains("tampered disks_h"));
}
