//! Cellular automorphisms and the Lefschetz calculus.
//!
//! An automorphism of a polygonal complex permutes vertices, edges and faces
//! and records, for each edge and face, whether the image is traversed with
//! or against its stored orientation. Such a map induces signed permutation
//! matrices on the cellular chain complex; their alternating traces give the
//! Lefschetz number, which is compared against the same number computed on
//! homology and against direct counts of invariant cells.

pub mod chain;
pub mod cover;
pub mod enumerate;
pub mod homology;
pub mod partition;
pub mod triviality;

use thiserror::Error;

use crate::complex::{Side, SurfaceComplex};

pub use chain::{chain_complex, induced_chain_map, lefschetz_chain, ChainComplex, ChainMap};
pub use cover::{orientation_double_cover, DoubleCover};
pub use enumerate::{automorphisms, Flag};
pub use homology::{betti_numbers, lefschetz_homology, Homology};
pub use partition::{delta_partition, shrink_boundary, CellPartition, DeltaPartition};
pub use triviality::{
    check_klh, invariant_cells, propagate_triviality, triviality_theorem, Certificate, InvariantCells, KlhReport,
    TheoremReport, Verdict,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CellularError {
    #[error("map has {got} {kind} images for {expected} cells")]
    WrongSize { kind: &'static str, expected: usize, got: usize },
    #[error("{kind} map is not a bijection")]
    NotBijective { kind: &'static str },
    #[error("image of edge {edge} does not join the images of its endpoints")]
    EdgeIncidence { edge: usize },
    #[error("image of face {face} does not match the images of its sides")]
    FaceIncidence { face: usize },
    #[error("map does not commute with the boundary operator in degree {degree}")]
    NotChainMap { degree: usize },
    #[error("boundary of boundary is not zero")]
    InconsistentIncidence,
    #[error("partition has half-open annulus cells and no cellular chain complex")]
    NotCellular,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("hypothesis fails: {0}")]
    HypothesisFails(String),
    #[error("surface is already orientable")]
    AlreadyOrientable,
    #[error("boundary circle is not covered by an annulus cell")]
    BoundaryNotInAnnuli,
    #[error("necessary condition failed: {0}")]
    NecessaryConditionFailed(String),
    #[error("partition of this neighbourhood is not supported: {0}")]
    UnsupportedPartition(String),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
}

/// A cell permutation with orientation signs. `true` means the image cell
/// is traversed along its stored orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellularAutomorphism {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, bool)>,
    pub faces: Vec<(usize, bool)>,
}

fn check_bijective(kind: &'static str, images: impl Iterator<Item = usize>, n: usize) -> Result<(), CellularError> {
    let mut hit = vec![false; n];
    for i in images {
        if i >= n || std::mem::replace(&mut hit[i], true) {
            return Err(CellularError::NotBijective { kind });
        }
    }
    Ok(())
}

impl CellularAutomorphism {
    pub fn identity(s: &SurfaceComplex) -> CellularAutomorphism {
        CellularAutomorphism {
            vertices: (0..s.vertex_count()).collect(),
            edges: (0..s.edge_count()).map(|e| (e, true)).collect(),
            faces: (0..s.face_count()).map(|f| (f, true)).collect(),
        }
    }

    /// Checks sizes, bijectivity and compatibility with all incidences.
    pub fn validate(&self, s: &SurfaceComplex) -> Result<(), CellularError> {
        for (kind, got, expected) in [
            ("vertex", self.vertices.len(), s.vertex_count()),
            ("edge", self.edges.len(), s.edge_count()),
            ("face", self.faces.len(), s.face_count()),
        ] {
            if got != expected {
                return Err(CellularError::WrongSize { kind, expected, got });
            }
        }
        check_bijective("vertex", self.vertices.iter().copied(), s.vertex_count())?;
        check_bijective("edge", self.edges.iter().map(|e| e.0), s.edge_count())?;
        check_bijective("face", self.faces.iter().map(|f| f.0), s.face_count())?;
        for e in 0..s.edge_count() {
            let [a, b] = s.endpoints(e);
            let (image, forward) = self.edges[e];
            let [x, y] = s.endpoints(image);
            let (ha, hb) = (self.vertices[a], self.vertices[b]);
            let ok = if forward { ha == x && hb == y } else { ha == y && hb == x };
            if !ok {
                return Err(CellularError::EdgeIncidence { edge: e });
            }
        }
        for f in 0..s.face_count() {
            let mapped: Vec<Side> = s.face(f).iter().map(|&side| self.side(side)).collect();
            let (image, forward) = self.faces[f];
            let target: Vec<Side> = if forward {
                s.face(image).to_vec()
            } else {
                s.face(image).iter().rev().map(|side| side.reversed()).collect()
            };
            if !is_rotation(&mapped, &target) {
                return Err(CellularError::FaceIncidence { face: f });
            }
        }
        Ok(())
    }

    /// Image of a directed side.
    pub fn side(&self, side: Side) -> Side {
        let (image, forward) = self.edges[side.edge];
        Side::new(image, side.forward == forward)
    }

    pub fn compose(&self, then: &CellularAutomorphism) -> CellularAutomorphism {
        CellularAutomorphism {
            vertices: self.vertices.iter().map(|&v| then.vertices[v]).collect(),
            edges: self
                .edges
                .iter()
                .map(|&(e, s)| {
                    let (e2, s2) = then.edges[e];
                    (e2, s == s2)
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|&(f, s)| {
                    let (f2, s2) = then.faces[f];
                    (f2, s == s2)
                })
                .collect(),
        }
    }

    pub fn inverse(&self) -> CellularAutomorphism {
        let mut vertices = vec![0; self.vertices.len()];
        for (v, &w) in self.vertices.iter().enumerate() {
            vertices[w] = v;
        }
        let mut edges = vec![(0, true); self.edges.len()];
        for (e, &(w, s)) in self.edges.iter().enumerate() {
            edges[w] = (e, s);
        }
        let mut faces = vec![(0, true); self.faces.len()];
        for (f, &(w, s)) in self.faces.iter().enumerate() {
            faces[w] = (f, s);
        }
        CellularAutomorphism { vertices, edges, faces }
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.iter().enumerate().all(|(v, &w)| v == w)
            && self.edges.iter().enumerate().all(|(e, &(w, s))| e == w && s)
            && self.faces.iter().enumerate().all(|(f, &(w, s))| f == w && s)
    }

    /// Every cell is mapped to itself with its orientation.
    pub fn is_delta_trivial(&self) -> bool {
        self.is_identity()
    }

    /// `Some(true)` if orientation preserving, `Some(false)` if reversing,
    /// `None` on a non-orientable surface.
    pub fn preserves_orientation(&self, s: &SurfaceComplex) -> Option<bool> {
        let flip = s.orientation()?;
        let mut verdict = None;
        for (f, &(image, forward)) in self.faces.iter().enumerate() {
            let keeps = forward ^ flip[f] ^ flip[image];
            match verdict {
                None => verdict = Some(keeps),
                Some(v) if v != keeps => return None,
                Some(_) => {}
            }
        }
        verdict
    }

    /// Applies the map `k` times.
    pub fn power(&self, k: usize, s: &SurfaceComplex) -> CellularAutomorphism {
        let mut out = CellularAutomorphism::identity(s);
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }
}

fn is_rotation(a: &[Side], b: &[Side]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    (0..n).any(|r| (0..n).all(|i| a[i] == b[(i + r) % n]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_is_valid_and_trivial() {
        let s = fixtures::octahedron();
        let id = CellularAutomorphism::identity(&s);
        id.validate(&s).unwrap();
        assert!(id.is_delta_trivial());
        assert_eq!(id.preserves_orientation(&s), Some(true));
    }

    #[test]
    fn vertex_swap_without_edges_is_rejected() {
        let s = fixtures::octahedron();
        let mut h = CellularAutomorphism::identity(&s);
        h.vertices.swap(0, 5);
        assert!(matches!(h.validate(&s), Err(CellularError::EdgeIncidence { .. })));
    }

    #[test]
    fn inverse_and_compose() {
        let s = fixtures::torus_grid(4, 4);
        let all = automorphisms(&s);
        for h in all.iter().take(20) {
            h.validate(&s).unwrap();
            assert!(h.compose(&h.inverse()).is_identity());
        }
    }
}
