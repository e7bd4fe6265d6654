use proptest::prelude::*;

use surface_foliation::atlas::Atlas;
use surface_foliation::cellular::{
    automorphisms, chain_complex, induced_chain_map, invariant_cells, lefschetz_chain, CellPartition, CellularAutomorphism,
    Homology,
};
use surface_foliation::fixtures;
use surface_foliation::function::{morse_sum, validate_axioms};
use surface_foliation::generate::{generate, random_word_instance, SurfaceKind};
use surface_foliation::io::{parse_automorphism, parse_instance, serialize_automorphism, serialize_instance};

fn kind() -> impl Strategy<Value = SurfaceKind> {
    prop_oneof![
        (0u32..=3, 0u32..=2).prop_map(|(g, b)| SurfaceKind::orientable(g, b)),
        (1u32..=3, 0u32..=1).prop_map(|(k, b)| SurfaceKind::non_orientable(k, b)),
    ]
}

fn small_kind() -> impl Strategy<Value = SurfaceKind> {
    prop_oneof![
        (0u32..=1, 0u32..=1).prop_map(|(g, b)| SurfaceKind::orientable(g, b)),
        (1u32..=2, 0u32..=1).prop_map(|(k, b)| SurfaceKind::non_orientable(k, b)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn generated_surfaces_have_the_requested_type(kind in kind(), seed in any::<u64>()) {
        let (s, f) = generate(kind, seed).unwrap();
        let class = s.classify().unwrap();
        prop_assert_eq!(class.euler_char, kind.euler_char());
        prop_assert_eq!(class.orientable, kind.crosscaps == 0);
        prop_assert_eq!(class.boundary_count as u32, kind.boundary);
        let report = validate_axioms(&s, &f).unwrap();
        if s.is_closed() {
            prop_assert_eq!(morse_sum(&report.critical), class.euler_char);
        }
    }

    #[test]
    fn generation_is_deterministic(kind in kind(), seed in any::<u64>()) {
        let (s1, f1) = generate(kind, seed).unwrap();
        let (s2, f2) = generate(kind, seed).unwrap();
        let meta = serde_json::json!({});
        prop_assert_eq!(serialize_instance(&s1, &f1, &meta), serialize_instance(&s2, &f2, &meta));
    }

    #[test]
    fn instances_round_trip(kind in small_kind(), seed in any::<u64>()) {
        let (s, f) = random_word_instance(kind, seed).unwrap();
        let text = serialize_instance(&s, &f, &serde_json::json!({"seed": seed}));
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(serialize_instance(&parsed.complex, &parsed.function, &parsed.metadata), text);
    }

    #[test]
    fn canonical_neighbourhoods_partition_the_characteristic(kind in small_kind(), seed in 0u64..1000) {
        let (s, f) = random_word_instance(kind, seed).unwrap();
        let atlas = Atlas::new(&s, &f).unwrap();
        let class = s.classify().unwrap();
        prop_assume!(!class.is_disk());
        let check = surface_foliation::atlas::chi_sum_check(&atlas).unwrap();
        prop_assert!(check.equal);
        prop_assert_eq!(check.euler_char, class.euler_char);
    }
}

proptest! {
    #[test]
    fn parsers_never_panic(text in ".{0,200}") {
        let _ = parse_instance(&text);
        let _ = parse_automorphism(&text, &fixtures::tetrahedron());
    }

    #[test]
    fn mangled_instances_are_rejected_cleanly(cut in 0usize..400, insert in "[\\[\\]{},:0-9\"/-]{0,4}") {
        let (s, f) = random_word_instance(SurfaceKind::orientable(0, 0), 1).unwrap();
        let text = serialize_instance(&s, &f, &serde_json::json!({}));
        let cut = cut.min(text.len());
        let mangled = format!("{}{}{}", &text[..cut], insert, &text[cut..]);
        let _ = parse_instance(&mangled);
    }

    #[test]
    fn automorphisms_form_a_group(i in 0usize..48, j in 0usize..48) {
        let s = fixtures::octahedron();
        let group = automorphisms(&s);
        let (a, b) = (&group[i], &group[j]);
        let ab = a.compose(b);
        ab.validate(&s).unwrap();
        prop_assert!(group.contains(&ab));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        let orient = |h: &CellularAutomorphism| h.preserves_orientation(&s).unwrap();
        prop_assert_eq!(orient(&ab), orient(a) == orient(b));
    }

    #[test]
    fn torus_maps_satisfy_hopf_and_count(i in 0usize..128) {
        let s = fixtures::torus_grid(4, 4);
        let p = CellPartition::from_complex(&s);
        let h = &automorphisms(&s)[i];
        let cm = induced_chain_map(&p, h).unwrap();
        let homology = Homology::compute(&chain_complex(&p).unwrap());
        prop_assert_eq!(lefschetz_chain(&cm), homology.lefschetz(&cm));
        if h.preserves_orientation(&s) == Some(true) && !h.is_delta_trivial() {
            prop_assert_eq!(invariant_cells(&p, h).total() as i64, lefschetz_chain(&cm));
        }
    }

    #[test]
    fn automorphism_files_round_trip(i in 0usize..120) {
        let s = fixtures::icosahedron();
        let h = &automorphisms(&s)[i];
        prop_assert_eq!(&parse_automorphism(&serialize_automorphism(&s, h), &s).unwrap(), h);
    }
}
