//! The subsurface `M_neg` and the pieces of its complement.
//!
//! `R` is the union of the atoms of critical components whose canonical
//! neighbourhoods have negative Euler characteristic. Every component of the
//! complement of `R` that is a cylinder free of critical points is absorbed,
//! giving `M_neg`; the remaining complementary pieces are classified and
//! checked against the structure theorem they are expected to satisfy.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::atlas::{Atlas, AtlasError};
use crate::cellular::{delta_partition, CellularAutomorphism, CellularError};
use crate::complex::{complement_of_faces, Side, Subsurface, SurfaceClass, SurfaceComplex};
use crate::function::{CriticalVertex, PlFunction, VertexKind};
use crate::refine::VertexOrigin;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("χ(M) = {euler_char}; the construction needs a negative Euler characteristic")]
    ChiNotNegative { euler_char: i64 },
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("the map does not preserve f at vertex {vertex}")]
    NotFPreserving { vertex: u64 },
    #[error("the map is not trivial on the partition of component {component}")]
    NotDeltaTrivial { component: usize },
    #[error("the map moves the leaf {leaf}")]
    LeafMoved { leaf: String },
    #[error(transparent)]
    Cellular(#[from] CellularError),
}

impl From<crate::complex::ComplexError> for DecompositionError {
    fn from(e: crate::complex::ComplexError) -> Self {
        DecompositionError::Atlas(e.into())
    }
}

/// A component of the closure of `M \ M_neg`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub cells: Subsurface,
    pub class: SurfaceClass,
    pub critical: Vec<CriticalVertex>,
    /// Number of boundary circles of the piece lying on the boundary of `M`.
    pub circles_on_boundary: usize,
    /// `f` restricted to the piece, indexed by the piece's own vertices.
    pub restricted: PlFunction,
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    /// Critical components whose canonical neighbourhoods have `χ < 0`.
    pub negative_components: Vec<usize>,
    pub r_neg: Subsurface,
    /// Critical-point-free cylinders of the complement of `R`.
    pub absorbed: Vec<Subsurface>,
    pub m_neg: Subsurface,
    pub m_neg_components: Vec<Subsurface>,
    pub pieces: Vec<Piece>,
    /// Classes of every component of the complement of `R`.
    pub r_complement: Vec<SurfaceClass>,
    /// Failed structural checks; empty for a correct construction.
    pub violations: Vec<String>,
}

/// Components with negative canonical neighbourhoods.
pub fn negative_components(atlas: &Atlas) -> Result<Vec<usize>, DecompositionError> {
    let euler_char = atlas.surface_class()?.euler_char;
    if euler_char >= 0 {
        return Err(DecompositionError::ChiNotNegative { euler_char });
    }
    let found: Vec<usize> = atlas.canonical.iter().filter(|n| n.euler_char < 0).map(|n| n.component).collect();
    if found.is_empty() {
        return Err(DecompositionError::InvariantViolation(
            "χ(M) < 0 but no canonical neighbourhood has negative Euler characteristic".into(),
        ));
    }
    Ok(found)
}

fn critical_in(atlas: &Atlas, cells: &Subsurface) -> Vec<CriticalVertex> {
    atlas.foliation.critical().iter().copied().filter(|c| cells.contains_vertex(c.vertex)).collect()
}

pub fn build_m_neg(atlas: &Atlas) -> Result<DecompositionReport, DecompositionError> {
    let negative = negative_components(atlas)?;
    let s = atlas.refined();
    let r_faces: BTreeSet<usize> =
        negative.iter().flat_map(|&k| atlas.atoms[k].cells.faces().iter().copied()).collect();
    let r_neg = Subsurface::new(s, r_faces.iter().copied())?;
    let mut m_faces = r_faces.clone();
    let mut absorbed = Vec::new();
    let mut r_complement = Vec::new();
    if r_faces.len() < s.face_count() {
        let faces: Vec<usize> = r_faces.iter().copied().collect();
        for c in complement_of_faces(s, &faces)? {
            let class = c.classify()?;
            r_complement.push(class);
            if class.is_cylinder() && critical_in(atlas, &c).is_empty() {
                m_faces.extend(c.faces().iter().copied());
                absorbed.push(c);
            }
        }
    }
    let m_neg = Subsurface::new(s, m_faces.iter().copied())?;
    let m_neg_components = m_neg.components(s);
    let mut pieces = Vec::new();
    if m_faces.len() < s.face_count() {
        let faces: Vec<usize> = m_faces.iter().copied().collect();
        for cells in complement_of_faces(s, &faces)? {
            let class = cells.classify()?;
            let critical = critical_in(atlas, &cells);
            let circles_on_boundary = cells
                .induced_boundary()
                .iter()
                .filter(|circle| circle.iter().all(|side| s.is_boundary_edge(side.edge)))
                .count();
            let restricted = atlas.foliation.refined.function.restrict(cells.parent_vertices());
            pieces.push(Piece { cells, class, critical, circles_on_boundary, restricted });
        }
    }
    let mut report = DecompositionReport {
        negative_components: negative,
        r_neg,
        absorbed,
        m_neg,
        m_neg_components,
        pieces,
        r_complement,
        violations: Vec::new(),
    };
    report.violations = verify(atlas, &report);
    Ok(report)
}

/// Re-checks every structural claim about a report.
pub fn verify(atlas: &Atlas, report: &DecompositionReport) -> Vec<String> {
    let s = atlas.refined();
    let f = &atlas.foliation.refined.function;
    let mut out = Vec::new();

    let mut union: BTreeSet<usize> = report.r_neg.faces().iter().copied().collect();
    for b in &report.absorbed {
        if !b.is_disjoint_from(&report.r_neg) {
            out.push("an absorbed cylinder overlaps R".into());
        }
        union.extend(b.faces().iter().copied());
    }
    if union.iter().copied().collect::<Vec<_>>() != report.m_neg.faces() {
        out.push("M_neg differs from R together with the absorbed cylinders".into());
    }
    let mut covered = report.m_neg.faces().len();
    for p in &report.pieces {
        if !p.cells.is_disjoint_from(&report.m_neg) {
            out.push("a piece overlaps M_neg".into());
        }
        covered += p.cells.faces().len();
    }
    if covered != s.face_count() {
        out.push("M_neg and the pieces do not tile M".into());
    }

    let critical_values: BTreeSet<_> =
        atlas.foliation.critical().iter().map(|c| f.value(c.vertex).clone()).collect();
    for circle in report.m_neg.induced_boundary() {
        let value = f.value(s.side_start(circle[0]));
        let level = circle.iter().all(|side| f.value(s.side_start(*side)) == value);
        if !level {
            out.push("f is not constant on a boundary circle of M_neg".into());
        } else if critical_values.contains(value) {
            out.push("a boundary circle of M_neg lies on a critical level".into());
        }
    }

    for class in &report.r_complement {
        if !(class.is_disk() || class.is_cylinder() || class.is_mobius_band()) {
            out.push(format!("the complement of R has a piece of type {}", class.name()));
        }
    }

    let m_edges: BTreeSet<usize> = report.m_neg.parent_edges().iter().copied().collect();
    for (i, p) in report.pieces.iter().enumerate() {
        if !(p.class.is_disk() || p.class.is_cylinder() || p.class.is_mobius_band()) {
            out.push(format!("piece {i} is a {}", p.class.name()));
        }
        if p.critical.is_empty() {
            out.push(format!("piece {i} contains no critical point"));
        }
        let frontier_outside = p
            .cells
            .boundary_edges()
            .into_iter()
            .any(|e| !s.is_boundary_edge(e) && !m_edges.contains(&e));
        if frontier_outside {
            out.push(format!("the frontier of piece {i} leaves M_neg"));
        }
        if (p.class.is_disk() || p.class.is_mobius_band())
            && !p.critical.iter().any(|c| matches!(c.kind, VertexKind::Min | VertexKind::Max))
        {
            out.push(format!("piece {i} has no local extremum"));
        }
    }
    out
}

impl DecompositionReport {
    /// Pieces with a boundary circle on the boundary of `M`. Their whole
    /// boundary is not inside `M_neg`; only the frontier is.
    pub fn pieces_on_boundary(&self) -> Vec<usize> {
        (0..self.pieces.len()).filter(|&i| self.pieces[i].circles_on_boundary > 0).collect()
    }

    /// Edges of the adjacency graph: `(m_neg component, piece, shared circle)`.
    pub fn adjacency(&self) -> Vec<(usize, usize, Vec<Side>)> {
        let mut out = Vec::new();
        for (pi, p) in self.pieces.iter().enumerate() {
            for circle in p.cells.induced_boundary() {
                for (mi, m) in self.m_neg_components.iter().enumerate() {
                    let edges: BTreeSet<usize> = m.boundary_edges();
                    if circle.iter().all(|side| edges.contains(&side.edge)) {
                        out.push((mi, pi, circle.clone()));
                    }
                }
            }
        }
        out
    }
}

/// One factor of the product decomposition: a piece, its type, and the
/// critical data of `f` on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub piece: usize,
    pub class: String,
    pub euler_char: i64,
    pub minima: usize,
    pub maxima: usize,
    pub saddles: Vec<u32>,
}

pub fn orbit_factorization(report: &DecompositionReport) -> Vec<Factor> {
    report
        .pieces
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let count = |k: VertexKind| p.critical.iter().filter(|c| c.kind == k).count();
            let saddles = p
                .critical
                .iter()
                .filter_map(|c| match c.kind {
                    VertexKind::Saddle(m) => Some(m),
                    _ => None,
                })
                .collect();
            Factor {
                piece: i,
                class: p.class.name(),
                euler_char: p.class.euler_char,
                minima: count(VertexKind::Min),
                maxima: count(VertexKind::Max),
                saddles,
            }
        })
        .collect()
}

/// Convenience for callers holding only an instance.
pub fn decompose(s: &SurfaceComplex, f: &PlFunction) -> Result<(Atlas, DecompositionReport), DecompositionError> {
    let atlas = Atlas::new(s, f)?;
    let report = build_m_neg(&atlas)?;
    Ok((atlas, report))
}

/// What [`leaf_invariance_check`] looked at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafReport {
    pub components: usize,
    pub arcs: usize,
    pub circles: usize,
}

/// Image of every refined vertex under a map of the original complex that
/// preserves `f`.
fn refined_vertex_map(atlas: &Atlas, h: &CellularAutomorphism) -> Vec<usize> {
    let r = &atlas.foliation.refined;
    let index: HashMap<&VertexOrigin, usize> = r.vertex_origin.iter().enumerate().map(|(v, o)| (o, v)).collect();
    r.vertex_origin
        .iter()
        .map(|o| {
            let image = match o {
                VertexOrigin::Original(v) => VertexOrigin::Original(h.vertices[*v]),
                VertexOrigin::OnEdge { edge, level } => VertexOrigin::OnEdge { edge: h.edges[*edge].0, level: level.clone() },
            };
            index[&image]
        })
        .collect()
}

fn walk_vertices(s: &SurfaceComplex, walk: &[Side]) -> Vec<usize> {
    let mut out: Vec<usize> = walk.iter().map(|&side| s.side_start(side)).collect();
    if let Some(&last) = walk.last() {
        out.push(s.side_end(last));
    }
    out
}

fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|r| (0..a.len()).all(|i| a[i] == b[(i + r) % a.len()]))
}

/// Checks that an `f`-preserving map which is trivial on the partition of
/// every negative canonical neighbourhood fixes the leaves of `R` together
/// with their orientations.
pub fn leaf_invariance_check(
    atlas: &Atlas,
    report: &DecompositionReport,
    h: &CellularAutomorphism,
) -> Result<LeafReport, DecompositionError> {
    let surface = &atlas.foliation.surface;
    let f = &atlas.foliation.function;
    h.validate(surface)?;
    for v in 0..surface.vertex_count() {
        if f.value(h.vertices[v]) != f.value(v) {
            return Err(DecompositionError::NotFPreserving { vertex: surface.vertex_label(v) });
        }
    }
    let s = atlas.refined();
    let map = refined_vertex_map(atlas, h);
    let by_vertices: HashMap<Vec<usize>, usize> = (0..s.face_count())
        .map(|face| {
            let mut key = s.face_vertices(face);
            key.sort_unstable();
            (key, face)
        })
        .collect();
    let mut checked = LeafReport { components: 0, arcs: 0, circles: 0 };
    for &k in &report.negative_components {
        let dp = delta_partition(atlas, k)?;
        let coarse = dp.partition.complex();
        let not_trivial = DecompositionError::NotDeltaTrivial { component: k };
        let vertices: Vec<usize> = dp
            .vertices
            .iter()
            .map(|v| dp.vertices.iter().position(|&w| w == map[*v]))
            .collect::<Option<_>>()
            .ok_or_else(|| not_trivial.clone())?;
        let arc_vertices: Vec<Vec<usize>> = dp.arcs.iter().map(|a| walk_vertices(s, a)).collect();
        let mut edges = Vec::with_capacity(dp.arcs.len());
        for seq in &arc_vertices {
            let image: Vec<usize> = seq.iter().map(|&v| map[v]).collect();
            let reversed: Vec<usize> = image.iter().rev().copied().collect();
            let hit = arc_vertices.iter().enumerate().find_map(|(b, other)| {
                if *other == image {
                    Some((b, true))
                } else if *other == reversed {
                    Some((b, false))
                } else {
                    None
                }
            });
            edges.push(hit.ok_or_else(|| not_trivial.clone())?);
        }
        let region_of: HashMap<usize, usize> =
            dp.regions.iter().enumerate().flat_map(|(r, faces)| faces.iter().map(move |&face| (face, r))).collect();
        let mut faces = Vec::with_capacity(dp.regions.len());
        for (r, region) in dp.regions.iter().enumerate() {
            let mut key: Vec<usize> = s.face_vertices(region[0]).iter().map(|&v| map[v]).collect();
            key.sort_unstable();
            let image = by_vertices.get(&key).and_then(|face| region_of.get(face)).copied();
            let image = image.ok_or_else(|| not_trivial.clone())?;
            let walk: Vec<Side> = coarse
                .face(r)
                .iter()
                .map(|side| {
                    let (b, keep) = edges[side.edge];
                    Side::new(b, side.forward == keep)
                })
                .collect();
            let target = coarse.face(image);
            let keeps = (0..target.len()).any(|rot| (0..walk.len()).all(|i| walk[i] == target[(i + rot) % target.len()]));
            faces.push((image, keeps));
        }
        let coarse_map = CellularAutomorphism { vertices, edges, faces };
        if coarse_map.validate(coarse).is_err() || !coarse_map.is_delta_trivial() {
            return Err(not_trivial);
        }
        checked.components += 1;
        checked.arcs += dp.arcs.len();
        for circle in &atlas.atoms[k].boundary_circles {
            let mut seq = walk_vertices(s, circle);
            seq.pop();
            let image: Vec<usize> = seq.iter().map(|&v| map[v]).collect();
            if !same_cycle(&seq, &image) {
                let labels: Vec<String> = seq.iter().map(|&v| s.vertex_label(v).to_string()).collect();
                return Err(DecompositionError::LeafMoved { leaf: format!("circle through {}", labels.join(" ")) });
            }
            checked.circles += 1;
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{fixtures, generate};

    #[test]
    fn flagship_has_two_negative_components() {
        let (s, f) = generate::genus_two_flagship();
        let (atlas, report) = decompose(&s, &f).unwrap();
        assert_eq!(report.negative_components.len(), 2);
        for &k in &report.negative_components {
            assert_eq!(atlas.canonical[k].euler_char, -1);
        }
        assert_eq!(report.m_neg_components.len(), 2);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert_eq!(orbit_factorization(&report).len(), report.pieces.len());
    }

    #[test]
    fn torus_is_rejected() {
        let s = fixtures::torus_grid(4, 4);
        let f = fixtures::torus_height(4, 4);
        assert!(matches!(decompose(&s, &f), Err(DecompositionError::ChiNotNegative { euler_char: 0 })));
    }

    #[test]
    fn pants_is_all_of_m_neg() {
        let (s, f) = generate::pair_of_pants();
        let (atlas, report) = decompose(&s, &f).unwrap();
        assert_eq!(report.negative_components.len(), 1);
        // the three collars are critical-free cylinders and get absorbed
        assert_eq!(report.absorbed.len(), 3);
        assert!(report.pieces.is_empty());
        assert_eq!(report.m_neg.faces().len(), atlas.refined().face_count());
        assert!(orbit_factorization(&report).is_empty());
        assert!(report.violations.is_empty());
    }

    #[test]
    fn identity_fixes_every_leaf() {
        let (s, f) = generate::genus_two_flagship();
        let (atlas, report) = decompose(&s, &f).unwrap();
        let checked = leaf_invariance_check(&atlas, &report, &CellularAutomorphism::identity(&s)).unwrap();
        assert_eq!(checked.components, 2);
        assert!(checked.circles >= 6);
    }

    #[test]
    fn sheet_swap_moves_the_atoms() {
        use crate::cellular::{orientation_double_cover, CellPartition};
        let kind = generate::SurfaceKind::non_orientable(3, 0);
        let (base, g) = generate::generate(kind, 1).unwrap();
        let cover = orientation_double_cover(&CellPartition::from_complex(&base)).unwrap();
        let s = cover.partition.complex().clone();
        let f = PlFunction::new(cover.vertex_base.iter().map(|&v| g.value(v).clone()).collect(), g.target());
        let (atlas, report) = decompose(&s, &f).unwrap();
        assert!(report.violations.is_empty());
        let deck = cover.deck();
        assert!(matches!(
            leaf_invariance_check(&atlas, &report, &deck),
            Err(DecompositionError::NotDeltaTrivial { .. })
        ));
        let mut bent = CellularAutomorphism::identity(&s);
        bent.vertices.swap(0, 1);
        assert!(matches!(leaf_invariance_check(&atlas, &report, &bent), Err(DecompositionError::Cellular(_))));
    }
}
