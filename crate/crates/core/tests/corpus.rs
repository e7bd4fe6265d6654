//! The structural claims about atoms, canonical neighbourhoods and the
//! decomposition, recounted from raw cells on the generated corpus.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use petgraph::unionfind::UnionFind;
use surface_foliation::atlas::{chi_sum_check, Atlas};
use surface_foliation::decomposition::{build_m_neg, negative_components, verify};
use surface_foliation::dot::decomposition_dot;
use surface_foliation::generate;
use surface_foliation::io::{parse_instance, serialize_instance};
use surface_foliation::selftest::{dot_round_trip, instance_corpus, CorpusInstance};
use surface_foliation::SurfaceComplex;

/// `V - E + F` of the closure of a set of faces.
fn chi_of_faces(s: &SurfaceComplex, faces: &[usize]) -> i64 {
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for &f in faces {
        for side in s.face(f) {
            edges.insert(side.edge);
            vertices.extend(s.endpoints(side.edge));
        }
    }
    vertices.len() as i64 - edges.len() as i64 + faces.len() as i64
}

/// Number of boundary circles of a set of faces, counted as components of
/// the graph of edges met by exactly one side of the set.
fn boundary_circles(s: &SurfaceComplex, faces: &[usize]) -> usize {
    let mut sides: HashMap<usize, usize> = HashMap::new();
    for &f in faces {
        for side in s.face(f) {
            *sides.entry(side.edge).or_default() += 1;
        }
    }
    let boundary: Vec<usize> = sides.into_iter().filter(|&(_, n)| n == 1).map(|(e, _)| e).collect();
    let mut uf = UnionFind::<usize>::new(s.vertex_count());
    let mut touched = BTreeSet::new();
    for &e in &boundary {
        let [a, b] = s.endpoints(e);
        uf.union(a, b);
        touched.extend([a, b]);
    }
    touched.iter().map(|&v| uf.find(v)).collect::<BTreeSet<_>>().len()
}

/// The corpus with one atlas per instance, built once for all tests.
fn corpus() -> &'static [(CorpusInstance, Atlas)] {
    static CORPUS: OnceLock<Vec<(CorpusInstance, Atlas)>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        instance_corpus(7)
            .into_iter()
            .map(|i| {
                let atlas = Atlas::new(&i.complex, &i.function).unwrap();
                (i, atlas)
            })
            .collect()
    })
}

#[test]
fn corpus_is_large_enough() {
    let corpus = corpus();
    let non_disk = corpus.iter().filter(|(i, _)| !i.complex.classify().unwrap().is_disk()).count();
    assert!(non_disk >= 50, "{non_disk}");
    for g in 0..=3 {
        for closed in [true, false] {
            assert!(corpus.iter().any(|(i, _)| {
                let c = i.complex.classify().unwrap();
                c.orientable && c.genus_or_crosscaps == g && (c.boundary_count == 0) == closed
            }));
        }
    }
}

#[test]
fn canonical_neighbourhoods_sum_to_the_surface() {
    for (instance, atlas) in corpus() {
        let s = &instance.complex;
        if s.classify().unwrap().is_disk() {
            continue;
        }
        let refined = atlas.refined();
        let chi_m = s.vertex_count() as i64 - s.edge_count() as i64 + s.face_count() as i64;
        assert_eq!(chi_of_faces(refined, &(0..refined.face_count()).collect::<Vec<_>>()), chi_m);
        let check = chi_sum_check(atlas).unwrap();
        let mut sum = 0;
        for &k in &check.components {
            let n = &atlas.canonical[k];
            let chi = chi_of_faces(refined, n.cells.faces());
            assert_eq!(chi, n.euler_char, "{}", instance.name);
            sum += chi;
        }
        assert_eq!(sum, chi_m, "{}", instance.name);
        assert!(check.equal);
    }
}

#[test]
fn pieces_are_disks_cylinders_or_mobius_bands() {
    let mut seen = 0;
    for (instance, atlas) in corpus() {
        if instance.complex.euler_characteristic() >= 0 {
            continue;
        }
        let report = build_m_neg(atlas).unwrap();
        assert!(verify(atlas, &report).is_empty(), "{}", instance.name);
        let refined = atlas.refined();
        let m_neg_edges: BTreeSet<usize> = report.m_neg.parent_edges().iter().copied().collect();
        for piece in &report.pieces {
            let faces = piece.cells.faces();
            let chi = chi_of_faces(refined, faces);
            let b = boundary_circles(refined, faces);
            assert!(matches!((chi, b), (1, 1) | (0, 2) | (0, 1)), "{}: χ = {chi}, {b} circles", instance.name);
            assert!(!piece.critical.is_empty());
            // every frontier edge of the piece lies on M_neg
            let mut count: HashMap<usize, usize> = HashMap::new();
            for &f in faces {
                for side in refined.face(f) {
                    *count.entry(side.edge).or_default() += 1;
                }
            }
            for (e, n) in count {
                if n == 1 && !refined.is_boundary_edge(e) {
                    assert!(m_neg_edges.contains(&e));
                }
            }
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn negative_neighbourhoods_exist_exactly_for_negative_surfaces() {
    for (instance, atlas) in corpus() {
        let refined = atlas.refined();
        let negative = atlas.canonical.iter().any(|n| !n.is_disk && chi_of_faces(refined, n.cells.faces()) < 0);
        assert_eq!(negative, instance.complex.euler_characteristic() < 0, "{}", instance.name);
    }
}

#[test]
fn flagship_has_two_negative_components() {
    let (s, f) = generate::genus_two_flagship();
    let atlas = Atlas::new(&s, &f).unwrap();
    assert_eq!(negative_components(&atlas).unwrap().len(), 2);
    let report = build_m_neg(&atlas).unwrap();
    assert_eq!(report.m_neg_components.len(), 2);
    for c in &report.m_neg_components {
        let class = c.classify().unwrap();
        assert_eq!((class.euler_char, class.boundary_count, class.orientable), (-1, 3, true));
    }
    let dot = decomposition_dot(&report);
    assert_eq!(dot_round_trip(&dot).unwrap(), report.m_neg_components.len() + report.pieces.len());
}

#[test]
fn corpus_instances_round_trip_through_json() {
    for (instance, _) in corpus().iter().step_by(5) {
        let text = serialize_instance(&instance.complex, &instance.function, &serde_json::json!({"name": instance.name}));
        let parsed = parse_instance(&text).unwrap();
        assert_eq!(serialize_instance(&parsed.complex, &parsed.function, &parsed.metadata), text);
        assert_eq!(parsed.complex.euler_characteristic(), instance.complex.euler_characteristic());
    }
}
