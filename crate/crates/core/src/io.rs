//! JSON instance and automorphism files.
//!
//! An instance file holds cell lists, one exact rational value per vertex
//! written as a `"p/q"` string, the target (`"line"` or `"circle"`) and free
//! metadata:
//!
//! ```json
//! {
//!   "vertices": [1, 2, 3],
//!   "edges": [[1, 1, 2], [2, 2, 3], [3, 3, 1]],
//!   "faces": [[1, [1, 2, 3]]],
//!   "values": {"1": "0", "2": "1/2", "3": "1"},
//!   "target": "line",
//!   "metadata": {}
//! }
//! ```
//!
//! An automorphism file maps caller ids, with a sign on edges and faces for
//! reversed orientation:
//!
//! ```json
//! {"vertex_map": [[1, 2]], "edge_map": [[1, -3]], "face_map": [[1, 1]]}
//! ```

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cellular::CellularAutomorphism;
use crate::complex::{CellLists, ComplexError, SurfaceComplex};
use crate::function::{format_rational, parse_rational, validate_axioms, FunctionError, PlFunction, Target};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error at {locus}: {message}")]
    Schema { locus: String, message: String },
    #[error("invalid complex: {0}")]
    Complex(#[from] ComplexError),
    #[error("invalid function: {0}")]
    Function(#[from] FunctionError),
}

impl IoError {
    fn schema(locus: impl Into<String>, message: impl Into<String>) -> IoError {
        IoError::Schema { locus: locus.into(), message: message.into() }
    }

    /// Input that parsed but does not describe a valid instance.
    pub fn is_validation(&self) -> bool {
        matches!(self, IoError::Complex(_) | IoError::Function(_))
    }
}

fn from_json_error(e: serde_json::Error) -> IoError {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => {
            IoError::Schema { locus: format!("line {}, column {}", e.line(), e.column()), message: e.to_string() }
        }
        _ => IoError::Syntax { line: e.line(), column: e.column(), message: e.to_string() },
    }
}

fn default_target() -> Target {
    Target::Line
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

/// The raw file contents, before any validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub vertices: Vec<u64>,
    pub edges: Vec<(u64, u64, u64)>,
    pub faces: Vec<(u64, Vec<i64>)>,
    pub values: BTreeMap<String, String>,
    #[serde(default = "default_target")]
    pub target: Target,
    #[serde(default = "empty_object")]
    pub metadata: serde_json::Value,
}

/// A validated instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub complex: SurfaceComplex,
    pub function: PlFunction,
    pub metadata: serde_json::Value,
}

pub fn read_instance_file(text: &str) -> Result<InstanceFile, IoError> {
    serde_json::from_str(text).map_err(from_json_error)
}

/// Builds the complex and the function without checking the axioms.
pub fn build_instance(file: &InstanceFile) -> Result<Instance, IoError> {
    let lists = CellLists { vertices: file.vertices.clone(), edges: file.edges.clone(), faces: file.faces.clone() };
    let complex = lists.build()?;
    let mut by_id: HashMap<u64, &str> = HashMap::new();
    for (key, value) in &file.values {
        let id: u64 = key.trim().parse().map_err(|_| IoError::schema(format!("values.{key}"), "key is not a vertex id"))?;
        if complex.vertex_by_label(id).is_none() {
            return Err(IoError::schema(format!("values.{key}"), "no such vertex"));
        }
        if by_id.insert(id, value).is_some() {
            return Err(IoError::schema(format!("values.{key}"), "vertex given two values"));
        }
    }
    let mut values = Vec::with_capacity(complex.vertex_count());
    for &id in complex.vertex_labels() {
        let text = by_id.get(&id).ok_or_else(|| IoError::schema(format!("values.{id}"), "missing value"))?;
        let value = parse_rational(text)
            .ok_or_else(|| IoError::schema(format!("values.{id}"), format!("{text:?} is not a rational p/q")))?;
        values.push(value);
    }
    Ok(Instance { complex, function: PlFunction::new(values, file.target), metadata: file.metadata.clone() })
}

/// Parses and validates an instance, including the function axioms.
pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let instance = build_instance(&read_instance_file(text)?)?;
    validate_axioms(&instance.complex, &instance.function)?;
    Ok(instance)
}

pub fn instance_file(s: &SurfaceComplex, f: &PlFunction, metadata: serde_json::Value) -> InstanceFile {
    let lists = s.to_cell_lists();
    let values = (0..s.vertex_count()).map(|v| (s.vertex_label(v).to_string(), format_rational(f.value(v)))).collect();
    InstanceFile {
        vertices: lists.vertices,
        edges: lists.edges,
        faces: lists.faces,
        values,
        target: f.target(),
        metadata,
    }
}

/// Pretty JSON with a trailing newline; identical inputs give identical bytes.
pub fn serialize_instance(s: &SurfaceComplex, f: &PlFunction, metadata: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(&instance_file(s, f, metadata.clone())).expect("instance serializes");
    text.push('\n');
    text
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismFile {
    pub vertex_map: Vec<(u64, u64)>,
    pub edge_map: Vec<(u64, i64)>,
    pub face_map: Vec<(u64, i64)>,
}

pub fn read_automorphism_file(text: &str) -> Result<AutomorphismFile, IoError> {
    serde_json::from_str(text).map_err(from_json_error)
}

fn resolve(
    kind: &'static str,
    pairs: impl Iterator<Item = (u64, i64)>,
    count: usize,
    lookup: impl Fn(u64) -> Option<usize>,
) -> Result<Vec<(usize, bool)>, IoError> {
    let mut out = vec![None; count];
    for (from, to) in pairs {
        let locus = format!("{kind}_map.{from}");
        let i = lookup(from).ok_or_else(|| IoError::schema(&locus, format!("no {kind} {from}")))?;
        let j = lookup(to.unsigned_abs()).ok_or_else(|| IoError::schema(&locus, format!("no {kind} {}", to.unsigned_abs())))?;
        if out[i].replace((j, to > 0)).is_some() {
            return Err(IoError::schema(locus, "mapped twice"));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| IoError::schema(format!("{kind}_map"), format!("{kind} at index {i} is not mapped"))))
        .collect()
}

/// Reads an automorphism of `s`. Incidence is not checked here.
pub fn parse_automorphism(text: &str, s: &SurfaceComplex) -> Result<CellularAutomorphism, IoError> {
    let file = read_automorphism_file(text)?;
    let label_index = |labels: Vec<u64>| -> HashMap<u64, usize> { labels.into_iter().enumerate().map(|(i, l)| (l, i)).collect() };
    let vertices = label_index(s.vertex_labels().to_vec());
    let edges = label_index((0..s.edge_count()).map(|e| s.edge_label(e)).collect());
    let faces = label_index((0..s.face_count()).map(|f| s.face_label(f)).collect());
    let v = resolve("vertex", file.vertex_map.iter().map(|&(a, b)| (a, b as i64)), s.vertex_count(), |l| {
        vertices.get(&l).copied()
    })?;
    let e = resolve("edge", file.edge_map.iter().copied(), s.edge_count(), |l| edges.get(&l).copied())?;
    let f = resolve("face", file.face_map.iter().copied(), s.face_count(), |l| faces.get(&l).copied())?;
    Ok(CellularAutomorphism { vertices: v.into_iter().map(|x| x.0).collect(), edges: e, faces: f })
}

pub fn serialize_automorphism(s: &SurfaceComplex, h: &CellularAutomorphism) -> String {
    let signed = |label: u64, forward: bool| if forward { label as i64 } else { -(label as i64) };
    let file = AutomorphismFile {
        vertex_map: h.vertices.iter().enumerate().map(|(v, &w)| (s.vertex_label(v), s.vertex_label(w))).collect(),
        edge_map: h.edges.iter().enumerate().map(|(e, &(d, fw))| (s.edge_label(e), signed(s.edge_label(d), fw))).collect(),
        face_map: h.faces.iter().enumerate().map(|(f, &(g, fw))| (s.face_label(f), signed(s.face_label(g), fw))).collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("automorphism serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const TETRAHEDRON: &str = r#"{
        "vertices": [1, 2, 3, 4],
        "edges": [[1, 1, 2], [2, 1, 3], [3, 1, 4], [4, 2, 3], [5, 2, 4], [6, 3, 4]],
        "faces": [[7, [1, 4, -2]], [8, [2, 6, -3]], [9, [3, -5, -1]], [10, [5, -6, -4]]],
        "values": {"1": "0", "2": "2/4", "3": "1", "4": "3/2"}
    }"#;

    #[test]
    fn parses_and_normalizes() {
        let inst = parse_instance(TETRAHEDRON).unwrap();
        assert_eq!(inst.complex.face_label(0), 7);
        let text = serialize_instance(&inst.complex, &inst.function, &inst.metadata);
        assert!(text.contains("\"1/2\""));
        let again = parse_instance(&text).unwrap();
        assert_eq!(serialize_instance(&again.complex, &again.function, &again.metadata), text);
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(parse_instance("{\"vertices\": [1,"), Err(IoError::Syntax { .. })));
        assert!(matches!(parse_instance("{\"vertices\": \"x\"}"), Err(IoError::Schema { .. })));
        let missing = TETRAHEDRON.replace(", \"4\": \"3/2\"", "");
        match parse_instance(&missing) {
            Err(IoError::Schema { locus, .. }) => assert_eq!(locus, "values.4"),
            other => panic!("{other:?}"),
        }
        let bad = TETRAHEDRON.replace("\"2/4\"", "\"2/0\"");
        assert!(matches!(parse_instance(&bad), Err(IoError::Schema { .. })));
        let broken = TETRAHEDRON.replace("[6, 3, 4]", "[6, 3, 2]");
        assert!(parse_instance(&broken).unwrap_err().is_validation());
    }

    #[test]
    fn automorphism_round_trip() {
        let s = fixtures::octahedron();
        for h in crate::cellular::automorphisms(&s).into_iter().take(10) {
            let text = serialize_automorphism(&s, &h);
            assert_eq!(parse_automorphism(&text, &s).unwrap(), h);
        }
        assert!(matches!(parse_automorphism("{\"vertex_map\": [[1, 99]], \"edge_map\": [], \"face_map\": []}", &s), Err(IoError::Schema { .. })));
    }
}
