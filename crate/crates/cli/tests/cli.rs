use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ptas3ec::graph::generators::{grid, path};
use ptas3ec::{is_feasible, parse_graph, parse_solution, write_graph, RequirementMap, Weight};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptas3ec")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn weight(v: &Value) -> Weight {
    Weight::new(v[0].as_i64().unwrap(), v[1].as_i64().unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn req(n: usize, terms: &[(usize, u8)]) -> RequirementMap {
    let mut r = RequirementMap::zeros(n);
    for &(v, x) in terms {
        r.set(v, x);
    }
    r
}

#[test]
fn triangle_value_from_every_mode() {
    let f = fixture("triangle.graph");
    let f = f.to_str().unwrap();
    let oracle = json(&run(&["--mode", "oracle", f]));
    assert_eq!(oracle["status"], "optimal");
    assert_eq!(weight(&oracle["solution"]["weight"]), Weight::from_integer(5));
    let dp = json(&run(&["--mode", "dp", f]));
    assert_eq!(weight(&dp["solution"]["weight"]), Weight::from_integer(5));
    let solve = json(&run(&[f]));
    assert_eq!(weight(&solve["solution"]["weight"]), Weight::from_integer(5));
}

#[test]
fn trivial_and_path_instances() {
    let dir = tempfile::tempdir().unwrap();
    let g = grid(3, 3);
    let f = write(dir.path(), "empty.graph", &write_graph(&g, &RequirementMap::zeros(9)));
    let out = json(&run(&[&f]));
    assert_eq!(weight(&out["solution"]["weight"]), Weight::from_integer(0));
    assert!(out["stats"].is_null());

    let f = write(dir.path(), "path.graph", &write_graph(&path(6), &req(6, &[(0, 1), (5, 1)])));
    let out = json(&run(&["--k", "1", "--oracle", &f]));
    assert_eq!(weight(&out["solution"]["weight"]), Weight::from_integer(5));
    assert_eq!(out["stats"]["oracle_ratio"].as_f64(), Some(1.0));
}

#[test]
fn grid_solution_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let g = grid(6, 6);
    let r = req(36, &[(0, 3), (5, 3), (30, 3), (35, 3)]);
    let f = write(dir.path(), "grid.graph", &write_graph(&g, &r));
    let outdir = dir.path().join("out");
    let out = json(&run(&["--epsilon", "1/2", "--out", outdir.to_str().unwrap(), &f]));
    let (g2, r2) = parse_graph(&fs::read_to_string(&f).unwrap()).unwrap();
    let (sol, declared) = parse_solution(&fs::read_to_string(outdir.join("solution.txt")).unwrap(), g2.num_edges(), 3).unwrap();
    assert!(is_feasible(&g2, &sol, &r2));
    assert_eq!(sol.weight(&g2), declared);
    assert_eq!(weight(&out["solution"]["weight"]), declared);
    assert_eq!(weight(&out["stats"]["weight"]), declared);
    let stats: Value = serde_json::from_str(&fs::read_to_string(outdir.join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats, out);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = grid(5, 5);
    let f = write(dir.path(), "g.graph", &write_graph(&g, &req(25, &[(0, 2), (12, 2), (24, 1)])));
    let a = run(&["--threads", "1", "--seed", "3", &f]);
    let b = run(&["--threads", "4", "--seed", "3", &f]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["--mode", "spanner-stats", &f]);
    let b = run(&["--mode", "spanner-stats", &f]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["spanner_edges"].as_array().unwrap().len() >= v["mortar"]["bricks"].as_array().unwrap().len());
    assert_eq!(v["mortar"]["interiors_partition"], true);
}

#[test]
fn dp_matches_oracle_on_fixtures() {
    for name in ["k4.graph", "theta.graph", "octahedron.graph", "triangle.graph"] {
        let f = fixture(name);
        let f = f.to_str().unwrap();
        let dp = json(&run(&["--mode", "dp", f]));
        let oracle = json(&run(&["--mode", "oracle", f]));
        assert_eq!(dp["solution"]["weight"], oracle["solution"]["weight"], "{name}");
    }
}

#[test]
fn lab_fixtures_have_no_violations() {
    for name in ["k4.graph", "theta.graph", "octahedron.graph", "terminal_free_connection.graph"] {
        let f = fixture(name);
        let v = json(&run(&["--mode", "lab", f.to_str().unwrap()]));
        assert_eq!(v["cycle_terminal"]["violations"].as_array().unwrap().len(), 0, "{name}");
        assert_eq!(v["two_terminals"]["violations"].as_array().unwrap().len(), 0, "{name}");
        assert_eq!(v["connecting_paths"]["fail"], 0, "{name}");
    }
    let v = json(&run(&["--mode", "lab", "--instances", "20"]));
    assert_eq!(v["cycle_terminal"]["instances"], 20);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.graph", "not a graph\n");
    assert_eq!(run(&[&bad]).status.code(), Some(4));
    assert_eq!(run(&["--epsilon", "2", &fixture("triangle.graph").to_string_lossy()]).status.code(), Some(4));
    assert_eq!(run(&["--no-such-flag"]).status.code(), Some(4));
    let p = write(dir.path(), "p.graph", &write_graph(&path(3), &req(3, &[(0, 2), (2, 2)])));
    assert_eq!(run(&["--k", "1", &p]).status.code(), Some(2));
    let g = write(dir.path(), "g.graph", &write_graph(&grid(4, 4), &req(16, &[(0, 3), (15, 3)])));
    assert_eq!(run(&["--mode", "dp", "--width-cap", "1", &g]).status.code(), Some(3));
    assert_eq!(run(&["--mode", "oracle", "--node-budget", "1", &g]).status.code(), Some(3));
}
