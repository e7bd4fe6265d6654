use surface_foliation::atlas::Atlas;
use surface_foliation::cellular::{
    delta_partition, orientation_double_cover, shrink_boundary, triviality_theorem, CellPartition, CellularAutomorphism,
    CellularError, Verdict,
};
use surface_foliation::fixtures;
use surface_foliation::generate::{self, SurfaceKind};

fn row_shift(p: &CellPartition) -> CellularAutomorphism {
    p.automorphisms()
        .into_iter()
        .find(|h| (0..16).all(|v| h.vertices[v] == (v + 4) % 16) && h.preserves_orientation(p.complex()) == Some(true))
        .expect("the row shift is cellular")
}

#[test]
fn pants_maps_passing_the_checks_are_trivial() {
    let (s, f) = generate::pair_of_pants();
    let atlas = Atlas::new(&s, &f).unwrap();
    let k = atlas.canonical.iter().position(|n| n.euler_char == -1).unwrap();
    let p = delta_partition(&atlas, k).unwrap().partition;
    let maps = p.automorphisms();
    assert!(maps.len() > 1);
    let mut trivial = 0;
    for h in &maps {
        match triviality_theorem(&p, h, true) {
            Ok(report) => {
                assert!(matches!(report.verdict, Verdict::DeltaTrivial { .. }));
                assert!(h.is_delta_trivial());
                assert_eq!(report.closed_euler_char, report.euler_char + 3);
                trivial += 1;
            }
            Err(CellularError::NecessaryConditionFailed(_)) => assert!(!h.is_delta_trivial()),
            Err(e) => panic!("{e}"),
        }
    }
    assert_eq!(trivial, 1);
}

#[test]
fn flagship_negative_components_force_triviality() {
    let (s, f) = generate::genus_two_flagship();
    let atlas = Atlas::new(&s, &f).unwrap();
    let negative: Vec<usize> = (0..atlas.canonical.len()).filter(|&k| atlas.canonical[k].euler_char < 0).collect();
    assert_eq!(negative.len(), 2);
    for k in negative {
        let p = delta_partition(&atlas, k).unwrap().partition;
        assert_eq!(p.euler_characteristic(), -1);
        for h in p.automorphisms() {
            match triviality_theorem(&p, &h, true) {
                Ok(report) => assert!(matches!(report.verdict, Verdict::DeltaTrivial { .. })),
                Err(e) => assert!(matches!(e, CellularError::NecessaryConditionFailed(_)), "{e}"),
            }
        }
    }
}

#[test]
fn torus_shift_has_no_invariant_cells() {
    let p = CellPartition::from_complex(&fixtures::torus_grid(4, 4));
    let report = triviality_theorem(&p, &row_shift(&p), true).unwrap();
    assert_eq!(report.verdict, Verdict::ExactlyLInvariantCells { count: 0, lefschetz: 0 });
    assert_eq!(report.assumed.len(), 1);
}

#[test]
fn nontrivial_action_on_homology_is_rejected() {
    let s = fixtures::torus_grid(4, 4);
    let p = CellPartition::from_complex(&s);
    // swapping the two wrap directions moves the homology classes
    let swap = p
        .automorphisms()
        .into_iter()
        .find(|h| (0..16).all(|v| h.vertices[v] == (v % 4) * 4 + v / 4))
        .expect("the diagonal reflection is cellular");
    assert!(matches!(triviality_theorem(&p, &swap, true), Err(CellularError::NecessaryConditionFailed(_))));
}

#[test]
fn the_assumption_must_be_stated() {
    let p = CellPartition::from_complex(&fixtures::torus_grid(4, 4));
    let h = row_shift(&p);
    assert!(matches!(triviality_theorem(&p, &h, false), Err(CellularError::PreconditionFailed(_))));
}

#[test]
fn positive_characteristic_needs_a_closed_orientable_surface() {
    let p = CellPartition::from_complex(&fixtures::hemicube());
    let h = CellularAutomorphism::identity(p.complex());
    assert!(matches!(triviality_theorem(&p, &h, true), Err(CellularError::PreconditionFailed(_))));
}

#[test]
fn shrinking_an_annulus_gives_a_sphere() {
    let annulus = generate::word_surface(&generate::standard_word(SurfaceKind::orientable(0, 2))).unwrap();
    assert_eq!(annulus.boundary_count(), 2);
    let p = CellPartition::with_collars(&annulus);
    assert_eq!(p.euler_characteristic(), 0);
    let closed = shrink_boundary(&p).unwrap();
    assert_eq!(closed.euler_characteristic(), 2);
    assert!(closed.is_closed());
    assert!(closed.annuli().is_empty());
}

#[test]
fn shrinking_the_pants_gives_a_sphere() {
    let (s, _) = generate::pair_of_pants();
    let closed = shrink_boundary(&CellPartition::with_collars(&s)).unwrap();
    assert_eq!(closed.euler_characteristic(), s.euler_characteristic() + 3);
}

#[test]
fn lifted_maps_double_the_kept_faces() {
    for s in [fixtures::klein_grid(3, 4), fixtures::hemicube()] {
        let p = CellPartition::from_complex(&s);
        let cover = orientation_double_cover(&p).unwrap();
        assert_eq!(cover.partition.euler_characteristic(), 2 * p.euler_characteristic());
        for h in p.automorphisms() {
            let lifted = cover.lift(&p, &h).unwrap();
            let kept_below = h.faces.iter().enumerate().filter(|&(f, &(g, keep))| f == g && keep).count();
            let fixed_above = lifted.faces.iter().enumerate().filter(|&(f, &(g, _))| f == g).count();
            assert_eq!(fixed_above, 2 * kept_below);
        }
    }
}

#[test]
fn deck_transformation_reverses_orientation() {
    let p = CellPartition::from_complex(&fixtures::klein_grid(3, 4));
    let cover = orientation_double_cover(&p).unwrap();
    let deck = cover.deck();
    deck.validate(cover.partition.complex()).unwrap();
    assert_eq!(deck.preserves_orientation(cover.partition.complex()), Some(false));
    assert!(deck.compose(&deck).is_identity());
}
