use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use surface_foliation::cellular::CellularAutomorphism;
use surface_foliation::io::{parse_instance, serialize_automorphism};
use surface_foliation::selftest::dot_round_trip;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn sfol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfol")).args(args).output().expect("sfol runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn bundled_torus_is_valid() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = sfol(&["validate", path_str(&fixture("torus_height.json")), "--json", path_str(&json)]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("torus, χ = 0"));
    let report = read_json(&json);
    assert_eq!(report["surface"]["euler_char"], 0);
    assert_eq!(report["critical_vertices"], 4);
}

#[test]
fn decomposing_a_torus_is_a_precondition_failure() {
    let out = sfol(&["decompose", path_str(&fixture("torus_height.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("χ(M) = 0"));
}

#[test]
fn genus_two_decomposition_with_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("out.dot");
    let json = dir.path().join("out.json");
    let out = sfol(&["decompose", path_str(&fixture("genus2.json")), "--dot", path_str(&dot), "--json", path_str(&json)]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let report = read_json(&json);
    assert_eq!(report["negative_components"].as_array().unwrap().len(), 2);
    let components = report["m_neg_components"].as_array().unwrap().len();
    let pieces = report["pieces"].as_array().unwrap().len();
    assert_eq!(components, 2);
    assert!(report["violations"].as_array().unwrap().is_empty());
    let nodes = dot_round_trip(&std::fs::read_to_string(&dot).unwrap()).unwrap();
    assert_eq!(nodes, components + pieces);
}

#[test]
fn atoms_table_reports_the_sum() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("atoms.json");
    let out = sfol(&["atoms", path_str(&fixture("genus2.json")), "--json", path_str(&json)]);
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&json);
    assert_eq!(report["chi_sum_check"]["sum"], -2);
    assert_eq!(report["chi_sum_check"]["equal"], true);
    let negative = report["atoms"].as_array().unwrap().iter().filter(|a| a["canonical_euler_char"] == -1).count();
    assert_eq!(negative, 2);
}

#[test]
fn analyze_lists_the_torus_critical_points() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("analysis.json");
    let out = sfol(&["analyze", path_str(&fixture("torus_height.json")), "--json", path_str(&json)]);
    assert_eq!(out.status.code(), Some(0));
    let kinds: Vec<String> =
        read_json(&json)["critical"].as_array().unwrap().iter().map(|c| c["kind"].as_str().unwrap().to_string()).collect();
    assert_eq!(kinds, ["min", "saddle(1)", "saddle(1)", "max"]);
}

#[test]
fn quarter_turn_of_the_octahedron() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("lefschetz.json");
    let out = sfol(&[
        "lefschetz",
        path_str(&fixture("octahedron.json")),
        path_str(&fixture("octahedron_quarter_turn.json")),
        "--assume-isotopic",
        "--json",
        path_str(&json),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let report = read_json(&json);
    assert_eq!(report["traces"], serde_json::json!([2, 0, 0]));
    assert_eq!(report["lefschetz_chain"], 2);
    assert_eq!(report["lefschetz_homology"], 2);
    assert_eq!(report["klh"]["total_equals_lefschetz"], true);
    assert_eq!(report["theorem"]["verdict"]["ExactlyLInvariantCells"]["count"], 2);
}

#[test]
fn identity_on_genus_two_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let instance = parse_instance(&std::fs::read_to_string(fixture("genus2.json")).unwrap()).unwrap();
    let identity = dir.path().join("identity.json");
    std::fs::write(&identity, serialize_automorphism(&instance.complex, &CellularAutomorphism::identity(&instance.complex))).unwrap();
    let json = dir.path().join("report.json");
    let input = fixture("genus2.json");
    let args = ["lefschetz", path_str(&input), path_str(&identity), "--assume-isotopic", "--json", path_str(&json)];
    let out = sfol(&args);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let report = read_json(&json);
    assert_eq!(report["lefschetz_chain"], -2);
    assert!(report["theorem"]["verdict"]["DeltaTrivial"].is_object());
    let without = sfol(&args[..3]);
    assert_eq!(without.status.code(), Some(0));
}

#[test]
fn broken_automorphism_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    let good = std::fs::read_to_string(fixture("octahedron_quarter_turn.json")).unwrap();
    let mut value: Value = serde_json::from_str(&good).unwrap();
    // swap the images of two vertices without touching edges or faces
    let map = value["vertex_map"].as_array_mut().unwrap();
    let (a, b) = (map[0][1].clone(), map[1][1].clone());
    map[0][1] = b;
    map[1][1] = a;
    std::fs::write(&file, value.to_string()).unwrap();
    let out = sfol(&["lefschetz", path_str(&fixture("octahedron.json")), path_str(&file)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_instances_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let original = std::fs::read_to_string(fixture("octahedron.json")).unwrap();
    let cases = [
        ("syntax", original[..original.len() / 2].to_string()),
        ("missing value", {
            let mut v: Value = serde_json::from_str(&original).unwrap();
            v["values"].as_object_mut().unwrap().remove("3");
            v.to_string()
        }),
        ("unknown field", original.replacen('{', "{\"colour\": 1,", 1)),
    ];
    for (name, body) in cases {
        let file = dir.path().join(format!("{name}.json"));
        std::fs::write(&file, body).unwrap();
        let out = sfol(&["validate", path_str(&file)]);
        assert_eq!(out.status.code(), Some(1), "{name}");
        assert!(!text(&out.stderr).is_empty());
    }
    let missing = sfol(&["validate", path_str(&dir.path().join("absent.json"))]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn generation_is_deterministic_and_valid() {
    let a = sfol(&["generate", "genus:2,boundary:1", "--seed", "5"]);
    let b = sfol(&["generate", "genus:2,boundary:1", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let instance = parse_instance(&text(&a.stdout)).unwrap();
    assert_eq!(instance.complex.euler_characteristic(), -3);
    assert_eq!(sfol(&["generate", "genus:1,crosscaps:1"]).status.code(), Some(1));
}

#[test]
fn atoms_on_a_disk_skip_the_sum() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("disk.json");
    assert_eq!(sfol(&["generate", "genus:0,boundary:1", "--out", path_str(&file)]).status.code(), Some(0));
    let out = sfol(&["atoms", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("not applicable"));
}

#[test]
fn bundled_fixtures_match_the_generators() {
    for (name, kind) in [("torus_height.json", "torus-height"), ("genus2.json", "flagship"), ("pants.json", "pants")] {
        let out = sfol(&["generate", kind]);
        assert_eq!(text(&out.stdout), std::fs::read_to_string(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn sphere_height_has_only_extrema() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sphere.json");
    let json = dir.path().join("analysis.json");
    assert_eq!(sfol(&["generate", "sphere-height", "--out", path_str(&file)]).status.code(), Some(0));
    assert_eq!(sfol(&["analyze", path_str(&file), "--json", path_str(&json)]).status.code(), Some(0));
    let kinds: Vec<String> =
        read_json(&json)["critical"].as_array().unwrap().iter().map(|c| c["kind"].as_str().unwrap().to_string()).collect();
    assert_eq!(kinds, ["min", "max"]);
}
