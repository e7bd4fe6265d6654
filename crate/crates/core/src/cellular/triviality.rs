//! Invariant cells, the counting identity, and forced triviality.

use std::collections::VecDeque;

use serde::Serialize;

use super::chain::{chain_complex, induced_chain_map, lefschetz_chain};
use super::cover::orientation_double_cover;
use super::enumerate::{flag_end, flag_side, image_flag, s0, s1, s2, Flag, FlagIndex};
use super::homology::Homology;
use super::partition::{shrink_boundary, CellPartition};
use super::{CellularAutomorphism, CellularError};

/// Cells mapped to themselves, split by whether orientation is kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantCells {
    /// `h⁺`-invariant cells per dimension; fixed vertices count here.
    pub plus: [usize; 3],
    /// `h⁻`-invariant cells per dimension.
    pub minus: [usize; 3],
    /// The invariant cells themselves with their signs.
    pub cells: [Vec<(usize, bool)>; 3],
}

impl InvariantCells {
    pub fn counts(&self) -> [usize; 3] {
        [0, 1, 2].map(|k| self.plus[k] + self.minus[k])
    }

    pub fn total(&self) -> usize {
        self.counts().iter().sum()
    }
}

pub fn invariant_cells(p: &CellPartition, h: &CellularAutomorphism) -> InvariantCells {
    let _ = p;
    let vertices: Vec<(usize, bool)> =
        h.vertices.iter().enumerate().filter(|&(v, &w)| v == w).map(|(v, _)| (v, true)).collect();
    let fixed = |map: &[(usize, bool)]| -> Vec<(usize, bool)> {
        map.iter().enumerate().filter(|&(c, &(d, _))| c == d).map(|(c, &(_, s))| (c, s)).collect()
    };
    let cells = [vertices, fixed(&h.edges), fixed(&h.faces)];
    let plus = [0, 1, 2].map(|k| cells[k].iter().filter(|c| c.1).count());
    let minus = [0, 1, 2].map(|k| cells[k].len() - plus[k]);
    InvariantCells { plus, minus, cells }
}

/// Everything checked by the counting identity for one map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KlhReport {
    pub invariant: InvariantCells,
    pub traces: [i64; 3],
    pub lefschetz: i64,
    /// `c_i = (-1)^i tr h_i` for each dimension.
    pub per_dimension: [bool; 3],
    pub no_reversed_points_or_faces: bool,
    pub no_kept_edges: bool,
    pub total_equals_lefschetz: bool,
    pub nonnegative: bool,
}

impl KlhReport {
    pub fn holds(&self) -> bool {
        self.per_dimension.iter().all(|&b| b)
            && self.no_reversed_points_or_faces
            && self.no_kept_edges
            && self.total_equals_lefschetz
            && self.nonnegative
    }
}

/// For an orientation preserving map of a closed orientable partition that
/// is not trivial, the number of invariant cells equals `L(h)`.
pub fn check_klh(p: &CellPartition, h: &CellularAutomorphism) -> Result<KlhReport, CellularError> {
    if !p.is_closed() {
        return Err(CellularError::PreconditionFailed("the partition is not of a closed surface".into()));
    }
    p.check_automorphism(h)?;
    match h.preserves_orientation(p.complex()) {
        None => return Err(CellularError::PreconditionFailed("the surface is not orientable".into())),
        Some(false) => return Err(CellularError::PreconditionFailed("the map reverses orientation".into())),
        Some(true) => {}
    }
    if h.is_delta_trivial() {
        return Err(CellularError::PreconditionFailed("the map is trivial on every cell".into()));
    }
    let cm = induced_chain_map(p, h)?;
    let traces = cm.traces();
    let lefschetz = lefschetz_chain(&cm);
    let invariant = invariant_cells(p, h);
    let counts = invariant.counts();
    let per_dimension = [0, 1, 2].map(|k| counts[k] as i64 == if k % 2 == 0 { traces[k] } else { -traces[k] });
    Ok(KlhReport {
        traces,
        lefschetz,
        per_dimension,
        no_reversed_points_or_faces: invariant.minus[0] == 0 && invariant.minus[2] == 0,
        no_kept_edges: invariant.plus[1] == 0,
        total_equals_lefschetz: invariant.total() as i64 == lefschetz,
        nonnegative: lefschetz >= 0,
        invariant,
    })
}

/// Order in which the cells were shown to be fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub flags: usize,
    /// `(dimension, cell)` in order of first visit.
    pub cells: Vec<(usize, usize)>,
}

/// If `h` fixes edge `e` with its direction and both faces along it, then
/// it fixes a flag and hence every flag reachable from it.
pub fn propagate_triviality(p: &CellPartition, h: &CellularAutomorphism, e: usize) -> Result<Certificate, CellularError> {
    let s = p.complex();
    h.validate(s)?;
    if e >= s.edge_count() {
        return Err(CellularError::HypothesisFails(format!("there is no edge {e}")));
    }
    if h.edges[e] != (e, true) {
        return Err(CellularError::HypothesisFails(format!("edge {} is not fixed with its direction", s.edge_label(e))));
    }
    for c in s.sides_of(e) {
        if h.faces[c.face].0 != c.face {
            return Err(CellularError::HypothesisFails(format!(
                "face {} along edge {} is moved",
                s.face_label(c.face),
                s.edge_label(e)
            )));
        }
    }
    let c = s.sides_of(e)[0];
    let start = Flag { face: c.face, side: c.index, start: true };
    let index = FlagIndex::new(s);
    let mut seen = vec![false; index.len()];
    let mut cell_seen = [vec![false; s.vertex_count()], vec![false; s.edge_count()], vec![false; s.face_count()]];
    let mut cells = Vec::new();
    let mut queue = VecDeque::from([start]);
    seen[index.index(start)] = true;
    while let Some(x) = queue.pop_front() {
        if image_flag(s, h, x) != Some(x) {
            return Err(CellularError::HypothesisFails(format!(
                "the map moves a flag of face {}",
                s.face_label(x.face)
            )));
        }
        let end = flag_end(s, x);
        for (dim, cell) in [(0, s.end_vertex(end)), (1, flag_side(s, x).edge), (2, x.face)] {
            if !std::mem::replace(&mut cell_seen[dim][cell], true) {
                cells.push((dim, cell));
            }
        }
        for y in [Some(s0(x)), Some(s1(s, x)), s2(s, x)].into_iter().flatten() {
            if !std::mem::replace(&mut seen[index.index(y)], true) {
                queue.push_back(y);
            }
        }
    }
    if cells.len() != s.vertex_count() + s.edge_count() + s.face_count() {
        return Err(CellularError::HypothesisFails("the complex is not connected".into()));
    }
    Ok(Certificate { flags: index.len(), cells })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    DeltaTrivial { certificate: Certificate },
    ExactlyLInvariantCells { count: usize, lefschetz: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub verdict: Verdict,
    /// Euler characteristic of the partitioned surface.
    pub euler_char: i64,
    pub boundary_circles: usize,
    /// Euler characteristic after shrinking the boundary circles.
    pub closed_euler_char: i64,
    pub used_double_cover: bool,
    pub assumed: Vec<String>,
    pub verified: Vec<String>,
}

/// Checks the homological shadow of "homotopic to the identity" on a closed
/// partition: `L(h) = χ` and the identity on `H_1`.
fn necessary_conditions(p: &CellPartition, h: &CellularAutomorphism, verified: &mut Vec<String>, what: &str) -> Result<i64, CellularError> {
    let cc = chain_complex(p)?;
    let cm = induced_chain_map(p, h)?;
    let homology = Homology::compute(&cc);
    let l = homology.lefschetz(&cm);
    let chi = cc.euler_characteristic();
    if l != chi {
        return Err(CellularError::NecessaryConditionFailed(format!("L(h) = {l} on {what} but χ = {chi}")));
    }
    verified.push(format!("L(h) = χ = {chi} on {what}"));
    if !homology.acts_trivially(&cm, 1) {
        return Err(CellularError::NecessaryConditionFailed(format!("h acts nontrivially on H_1 of {what}")));
    }
    verified.push(format!("h acts as the identity on H_1 of {what}"));
    Ok(l)
}

/// Decides the shape of a map assumed homotopic to the identity.
///
/// When the partitioned surface has negative Euler characteristic the map
/// must fix every cell with its orientation. When it is a closed orientable
/// surface of non-negative Euler characteristic, the map is either trivial or
/// has exactly `χ` invariant cells.
pub fn triviality_theorem(
    p: &CellPartition,
    h: &CellularAutomorphism,
    assumed_homotopic_to_id: bool,
) -> Result<TheoremReport, CellularError> {
    if !assumed_homotopic_to_id {
        return Err(CellularError::PreconditionFailed(
            "the map must be assumed homotopic to the identity".into(),
        ));
    }
    p.check_automorphism(h)?;
    let assumed = vec!["h is homotopic to the identity".to_string()];
    let mut verified = Vec::new();
    for (i, &a) in p.annuli().iter().enumerate() {
        if h.faces[a] != (a, true) {
            return Err(CellularError::NecessaryConditionFailed(format!(
                "boundary circle {i} is not mapped to itself with its orientation"
            )));
        }
    }
    if !p.annuli().is_empty() {
        verified.push("every boundary circle is fixed with its orientation".into());
    }
    let euler_char = p.euler_characteristic();
    let boundary_circles = p.boundary_count();
    let closed = shrink_boundary(p)?;
    let closed_euler_char = closed.euler_characteristic();
    let orientable = closed.complex().is_orientable();
    necessary_conditions(&closed, h, &mut verified, "the closed surface")?;

    let mut report = TheoremReport {
        verdict: Verdict::ExactlyLInvariantCells { count: 0, lefschetz: 0 },
        euler_char,
        boundary_circles,
        closed_euler_char,
        used_double_cover: !orientable,
        assumed,
        verified,
    };
    if euler_char >= 0 && !(boundary_circles == 0 && orientable) {
        return Err(CellularError::PreconditionFailed(
            "with χ ≥ 0 only a closed orientable surface is covered".into(),
        ));
    }
    if h.is_delta_trivial() {
        let certificate = propagate_triviality(&closed, h, 0)?;
        report.verified.push(format!("all {} cells are fixed with orientation", certificate.cells.len()));
        report.verdict = Verdict::DeltaTrivial { certificate };
        return Ok(report);
    }
    // a nontrivial map: count invariant cells on an oriented closed model
    let (model, lifted) = if orientable {
        (closed.clone(), h.clone())
    } else {
        let cover = orientation_double_cover(&closed)?;
        let lifted = cover.lift(&closed, h)?;
        necessary_conditions(&cover.partition, &lifted, &mut report.verified, "the orientation double cover")?;
        (cover.partition, lifted)
    };
    let klh = check_klh(&model, &lifted)?;
    if !klh.holds() {
        return Err(CellularError::NecessaryConditionFailed(format!(
            "the counting identity fails: {} invariant cells against L(h) = {}",
            klh.invariant.total(),
            klh.lefschetz
        )));
    }
    if euler_char < 0 {
        let marked = if orientable { boundary_circles } else { 2 * boundary_circles };
        return Err(CellularError::NecessaryConditionFailed(format!(
            "a nontrivial map would have {} invariant cells, at least {marked} of them marked, but L(h) = {} < 0 + {marked}",
            klh.invariant.total(),
            klh.lefschetz
        )));
    }
    report.verified.push(format!("{} invariant cells = L(h)", klh.invariant.total()));
    report.verdict = Verdict::ExactlyLInvariantCells { count: klh.invariant.total(), lefschetz: klh.lefschetz };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellular::enumerate::automorphisms;
    use crate::fixtures;

    #[test]
    fn identity_counts_every_cell() {
        let s = fixtures::octahedron();
        let p = CellPartition::from_complex(&s);
        let inv = invariant_cells(&p, &CellularAutomorphism::identity(&s));
        assert_eq!(inv.counts(), [6, 12, 8]);
        assert_eq!(
            check_klh(&p, &CellularAutomorphism::identity(&s)),
            Err(CellularError::PreconditionFailed("the map is trivial on every cell".into()))
        );
    }

    #[test]
    fn counting_identity_on_the_octahedron() {
        let s = fixtures::octahedron();
        let p = CellPartition::from_complex(&s);
        let mut checked = 0;
        for h in automorphisms(&s).into_iter().skip(1) {
            if h.preserves_orientation(&s) == Some(true) {
                assert!(check_klh(&p, &h).unwrap().holds());
                checked += 1;
            }
        }
        assert_eq!(checked, 23);
    }

    #[test]
    fn propagation_covers_everything_for_the_identity() {
        let s = fixtures::torus_grid(3, 3);
        let p = CellPartition::from_complex(&s);
        let cert = propagate_triviality(&p, &CellularAutomorphism::identity(&s), 4).unwrap();
        assert_eq!(cert.cells.len(), 9 + 18 + 9);
    }

    #[test]
    fn propagation_rejects_moved_faces() {
        let s = fixtures::octahedron();
        let p = CellPartition::from_complex(&s);
        for h in automorphisms(&s).into_iter().skip(1) {
            for e in 0..s.edge_count() {
                assert!(matches!(propagate_triviality(&p, &h, e), Err(CellularError::HypothesisFails(_))));
            }
        }
    }

    #[test]
    fn assumption_flag_is_required() {
        let s = fixtures::octahedron();
        let p = CellPartition::from_complex(&s);
        let h = CellularAutomorphism::identity(&s);
        assert!(matches!(triviality_theorem(&p, &h, false), Err(CellularError::PreconditionFailed(_))));
        let report = triviality_theorem(&p, &h, true).unwrap();
        assert!(matches!(report.verdict, Verdict::DeltaTrivial { .. }));
    }
}
