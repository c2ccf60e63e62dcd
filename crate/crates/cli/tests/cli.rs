use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use assur_core::{canonical_code, PinnedGraph, VertexKind};
use serde_json::Value;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn assur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_assur")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

/// Reads a graph file the way the tool does, for canonical comparisons.
fn parse_graph(text: &str) -> PinnedGraph {
    let v: Value = serde_json::from_str(text).unwrap();
    let mut g = PinnedGraph::new();
    for vert in v["vertices"].as_array().unwrap() {
        let kind = if vert["kind"] == "pinned" { VertexKind::Pinned } else { VertexKind::Inner };
        g.add_vertex(vert["id"].as_str().unwrap(), kind).unwrap();
    }
    for e in v["edges"].as_array().unwrap() {
        let a = g.find(e[0].as_str().unwrap()).unwrap();
        let b = g.find(e[1].as_str().unwrap()).unwrap();
        g.add_edge(a, b).unwrap();
    }
    g
}

#[test]
fn excavator_mobility() {
    let out = assur(&["dof", path_str(&data("linkages/excavator.json"))]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("F=2"), "{text}");
    assert!(text.contains("after driver removal F=0"), "{text}");
    assert!(!text.contains("lower bound"));

    let out = assur(&["dof", "--json", path_str(&data("linkages/excavator.json"))]);
    let r = report(&out);
    assert_eq!(r["mobility"], 2);
    assert_eq!(r["links"], 9);
    assert_eq!(r["joint_sum"], 11);
    assert_eq!(r["mobility_without_drivers"], 0);
    assert_eq!(r["links_without_drivers"], 7);
}

#[test]
fn pendulum_and_overbraced_linkages() {
    let out = assur(&["dof", path_str(&data("linkages/pendulum.json"))]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("F=1\n"));

    let out = assur(&["dof", "--json", path_str(&data("linkages/overbraced.json"))]);
    let r = report(&out);
    assert_eq!(r["mobility"], 3);
    assert_eq!(r["overbraced"], true);
    let out = assur(&["dof", path_str(&data("linkages/overbraced.json"))]);
    assert!(stdout(&out).contains("lower bound"));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"vertices\": [");
    assert_eq!(code(&assur(&["dof", path_str(&bad)])), 2);
    assert_eq!(code(&assur(&["check", path_str(&bad)])), 2);
    assert_eq!(code(&assur(&["decompose", path_str(&bad)])), 2);
    assert_eq!(code(&assur(&["verify", path_str(&bad)])), 2);
    let unknown = write(
        dir.path(),
        "unknown.json",
        r#"{"vertices": [{"id": "a", "kind": "inner"}], "edges": [["a", "zz"]]}"#,
    );
    assert_eq!(code(&assur(&["check", path_str(&unknown)])), 2);
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&assur(&["check", path_str(&missing)])), 2);
}

#[test]
fn assur_check_verdicts() {
    let out = assur(&["check", path_str(&data("graphs/dyad.json")), "--mode", "assur", "--seed", "5"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["seed"], 5);
    assert_eq!(r["verdict"]["disagreement"], false);

    let out = assur(&["check", path_str(&data("graphs/stacked_dyads.json"))]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["pass"], false);
    assert_eq!(r["witness"]["isostatic_subgraph_inner"], serde_json::json!(["a"]));
    let fixed = &r["witness"]["vertex_deletion"][0];
    assert_eq!(fixed["deleted"], "b");
    assert_eq!(fixed["fixed"], serde_json::json!(["a"]));
}

#[test]
fn every_method_alone() {
    for m in ["i", "ii", "iii", "iv"] {
        let ok = assur(&["check", path_str(&data("graphs/triad.json")), "--method", m]);
        assert_eq!(code(&ok), 0, "method {m}");
        let bad = assur(&["check", path_str(&data("graphs/stacked_dyads.json")), "--method", m]);
        assert_eq!(code(&bad), 1, "method {m}");
    }
}

#[test]
fn reports_are_stable_under_a_seed() {
    let file = data("graphs/stacked_dyads.json");
    let args = ["check", path_str(&file), "--seed", "17"];
    assert_eq!(assur(&args).stdout, assur(&args).stdout);
}

#[test]
fn pinned_and_laman_modes() {
    let out = assur(&["check", path_str(&data("graphs/stacked_dyads.json")), "--mode", "pinned"]);
    assert_eq!(code(&out), 0);
    let out = assur(&["check", path_str(&data("graphs/pendulum.json")), "--mode", "pinned"]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["witness"]["pinned_dof"], 1);

    let dir = tempfile::tempdir().unwrap();
    let overbraced = write(
        dir.path(),
        "overbraced.json",
        r#"{"vertices": [{"id": "a", "kind": "inner"}, {"id": "b", "kind": "inner"},
                         {"id": "p", "kind": "pinned"}, {"id": "q", "kind": "pinned"}],
            "edges": [["a", "p"], ["a", "q"], ["a", "b"], ["b", "p"], ["b", "q"]]}"#,
    );
    let out = assur(&["check", path_str(&overbraced), "--mode", "pinned"]);
    assert_eq!(code(&out), 1);
    let w = &report(&out)["witness"];
    assert_eq!(w["violation"]["edges"], 5);
    assert_eq!(w["overbraced"].as_array().unwrap().len(), 1);

    let triangle = write(
        dir.path(),
        "triangle.json",
        r#"{"vertices": [{"id": "a", "kind": "inner"}, {"id": "b", "kind": "inner"}, {"id": "c", "kind": "inner"}],
            "edges": [["a", "b"], ["b", "c"], ["a", "c"]]}"#,
    );
    assert_eq!(code(&assur(&["check", path_str(&triangle), "--mode", "laman"])), 0);
    let k4 = write(
        dir.path(),
        "k4.json",
        r#"{"vertices": [{"id": "a", "kind": "inner"}, {"id": "b", "kind": "inner"},
                         {"id": "c", "kind": "inner"}, {"id": "d", "kind": "inner"}],
            "edges": [["a", "b"], ["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"], ["c", "d"]]}"#,
    );
    let out = assur(&["check", path_str(&k4), "--mode", "laman"]);
    assert_eq!(code(&out), 1);
    let w = &report(&out)["witness"];
    assert_eq!(w["kind"], "dependent");
    assert_eq!(w["circuit"].as_array().unwrap().len(), 6);
}

#[test]
fn pin_pin_edges_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "dyad_plus.json",
        r#"{"vertices": [{"id": "v", "kind": "inner"}, {"id": "p", "kind": "pinned"}, {"id": "q", "kind": "pinned"}],
            "edges": [["v", "p"], ["v", "q"], ["p", "q"]]}"#,
    );
    assert_eq!(code(&assur(&["check", path_str(&f)])), 0);
}

#[test]
fn decompose_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("s.dot");
    let json = dir.path().join("s.json");
    let input = data("graphs/stacked_dyads.json");
    let out = assur(&["decompose", path_str(&input), "--dot", path_str(&dot), "--json", path_str(&json)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("2 components on 2 levels"));
    let dot = fs::read_to_string(&dot).unwrap();
    assert_eq!(dot.matches("->").count(), 1);
    assert!(dot.contains("c0 -> c1;"));

    let back = dir.path().join("back.json");
    assert_eq!(code(&assur(&["recompose", path_str(&json), "--out", path_str(&back)])), 0);
    let original = parse_graph(&fs::read_to_string(&input).unwrap());
    let rebuilt = parse_graph(&fs::read_to_string(&back).unwrap());
    assert_eq!(canonical_code(&original).unwrap(), canonical_code(&rebuilt).unwrap());
}

#[test]
fn decompose_single_component_and_failure() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("d.dot");
    let out = assur(&["decompose", path_str(&data("graphs/dyad.json")), "--dot", path_str(&dot)]);
    assert_eq!(code(&out), 0);
    let dot = fs::read_to_string(&dot).unwrap();
    assert_eq!(dot.matches("[label=").count(), 1);
    assert!(!dot.contains("->"));

    let out = assur(&["decompose", path_str(&data("graphs/pendulum.json"))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("\"pinned_dof\": 1"));
}

#[test]
fn motions() {
    let dyad = data("graphs/dyad.json");
    let out = assur(&["motion", path_str(&dyad), "--remove-edge", "v,p1", "--seed", "2"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["dimension"], 1);
    assert_eq!(r["moving"], serde_json::json!(["v"]));
    assert_eq!(r["seed"], 2);

    let out = assur(&["motion", path_str(&dyad)]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["summary"], "no motion");

    let triad = data("graphs/triad.json");
    for edge in ["a,b", "b,c", "a,c", "a,p1", "b,p2", "c,p3"] {
        for placement in [&["--seed", "4"][..], &["--positions"][..]] {
            let mut args = vec!["motion", path_str(&triad), "--remove-edge", edge];
            args.extend_from_slice(placement);
            let out = assur(&args);
            assert_eq!(code(&out), 0, "{edge}");
            let r = report(&out);
            assert_eq!(r["dimension"], 1);
            assert!(r["fixed"].as_array().unwrap().is_empty(), "{edge}");
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"v": [0, 1], "p1": [-1, 0], "p2": [1, 0]}"#);
    let out = assur(&["motion", path_str(&dyad), "--config", path_str(&cfg), "--remove-edge", "v,p2"]);
    let r = report(&out);
    let vel = &r["velocities"][0]["v"];
    // perpendicular to the remaining bar from p1 to v
    let dot = vel[0].as_f64().unwrap() + vel[1].as_f64().unwrap();
    assert!(dot.abs() < 1e-12);
    assert_eq!(code(&assur(&["motion", path_str(&dyad), "--remove-edge", "p1,p2"])), 2);
}

#[test]
fn generated_counts() {
    let out = assur(&["generate", "--assur", "--max-vertices", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("       3        1\n"), "{text}");
    assert!(text.contains("       4        0\n"), "{text}");

    let out = assur(&["generate", "--circuits", "--max-vertices", "4"]);
    assert!(stdout(&out).contains("       4        1\n"));

    let dir = tempfile::tempdir().unwrap();
    let out = assur(&[
        "generate",
        "--assur",
        "--max-vertices",
        "5",
        "--cross-check",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("agrees"));
    let cat: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("assur.json")).unwrap()).unwrap();
    assert_eq!(cat["classes"].as_array().unwrap().len(), 2);

    assert_eq!(code(&assur(&["generate", "--max-vertices", "4"])), 2);
    assert_eq!(code(&assur(&["generate", "--assur", "--max-vertices", "99"])), 2);
}

#[test]
fn certificates() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("triad.cert.json");
    assert_eq!(code(&assur(&["certify", path_str(&data("graphs/triad.json")), "--out", path_str(&cert)])), 0);
    assert_eq!(code(&assur(&["verify", path_str(&cert)])), 0);

    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    doc["steps"].as_array_mut().unwrap().clear();
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, doc.to_string()).unwrap();
    assert_eq!(code(&assur(&["verify", path_str(&tampered)])), 1);

    let out = assur(&["certify", path_str(&data("graphs/dyad.json"))]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["base"], "dyad");
    assert!(r["steps"].as_array().unwrap().is_empty());

    assert_eq!(code(&assur(&["certify", path_str(&data("graphs/stacked_dyads.json"))])), 1);
}
