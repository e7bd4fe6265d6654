//! Cell partitions, including those with half-open annulus cells.
//!
//! A partition is stored as a surface complex plus a set of faces marked as
//! annuli. A marked face stands for a half-open cylinder whose closed end is
//! glued along the face's boundary walk and whose open end is a boundary
//! circle of the surface. The underlying complex is therefore the surface
//! with every such boundary circle shrunk to a point, and the partition's own
//! Euler characteristic is that of the complex minus one for each annulus.

use std::collections::{BTreeSet, HashMap};

use petgraph::unionfind::UnionFind;

use crate::atlas::Atlas;
use crate::complex::{Side, SurfaceComplex};
use crate::foliation::Leaf;

use super::enumerate::{automorphisms, s0, s1, s2, Flag};
use super::{CellularAutomorphism, CellularError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPartition {
    complex: SurfaceComplex,
    annuli: Vec<usize>,
    /// Faces carrying a marked point left behind by a shrunk boundary circle.
    marked: Vec<usize>,
}

impl CellPartition {
    /// The cells of a complex, without annuli.
    pub fn from_complex(s: &SurfaceComplex) -> CellPartition {
        CellPartition { complex: s.clone(), annuli: Vec::new(), marked: Vec::new() }
    }

    /// A capped complex with the given faces marked as annuli.
    pub fn with_annuli(complex: SurfaceComplex, annuli: impl IntoIterator<Item = usize>) -> Result<CellPartition, CellularError> {
        let annuli: Vec<usize> = annuli.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if let Some(&f) = annuli.iter().find(|&&f| f >= complex.face_count()) {
            return Err(crate::complex::ComplexError::FaceOutOfRange(f).into());
        }
        Ok(CellPartition { complex, annuli, marked: Vec::new() })
    }

    /// The cells of `s` together with a collar annulus along every boundary
    /// circle. The result partitions a surface homeomorphic to `s`.
    pub fn with_collars(s: &SurfaceComplex) -> CellPartition {
        let circles = s.boundary_circles();
        if circles.is_empty() {
            return CellPartition::from_complex(s);
        }
        let cells = s.to_cell_lists();
        let edges: Vec<[usize; 2]> = (0..s.edge_count()).map(|e| s.endpoints(e)).collect();
        let mut faces: Vec<Vec<Side>> = (0..s.face_count()).map(|f| s.face(f).to_vec()).collect();
        let mut face_labels: Vec<u64> = cells.faces.iter().map(|(id, _)| *id).collect();
        let mut next = face_labels.iter().max().map_or(1, |m| m + 1);
        let mut annuli = Vec::new();
        for circle in circles {
            let existing = s.sides_of(circle[0].edge)[0];
            let same = s.face(existing.face)[existing.index] == circle[0];
            let walk: Vec<Side> =
                if same { circle.iter().rev().map(|side| side.reversed()).collect() } else { circle };
            annuli.push(faces.len());
            faces.push(walk);
            face_labels.push(next);
            next += 1;
        }
        let complex = SurfaceComplex::from_parts(
            s.vertex_labels().to_vec(),
            cells.edges.iter().map(|e| e.0).collect(),
            face_labels,
            edges,
            faces,
        )
        .expect("capping boundary circles of a surface gives a surface");
        CellPartition { complex, annuli, marked: Vec::new() }
    }

    pub fn complex(&self) -> &SurfaceComplex {
        &self.complex
    }

    pub fn annuli(&self) -> &[usize] {
        &self.annuli
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn is_annulus(&self, f: usize) -> bool {
        self.annuli.binary_search(&f).is_ok()
    }

    /// No annulus cells: the cells form a genuine CW structure.
    pub fn is_cellular(&self) -> bool {
        self.annuli.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.annuli.is_empty() && self.complex.is_closed()
    }

    pub fn boundary_count(&self) -> usize {
        self.annuli.len() + self.complex.boundary_count()
    }

    /// Euler characteristic of the partitioned surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.complex.euler_characteristic() - self.annuli.len() as i64
    }

    pub fn cell_counts(&self) -> [usize; 3] {
        [self.complex.vertex_count(), self.complex.edge_count(), self.complex.face_count()]
    }

    /// Validates `h` and checks that it permutes the annuli among themselves.
    pub fn check_automorphism(&self, h: &CellularAutomorphism) -> Result<(), CellularError> {
        h.validate(&self.complex)?;
        if self.annuli.iter().any(|&a| !self.is_annulus(h.faces[a].0)) {
            return Err(CellularError::PreconditionFailed("the map sends an annulus to a disk cell".into()));
        }
        Ok(())
    }

    /// Extends an automorphism of the uncapped complex over the collars of a
    /// partition built by [`CellPartition::with_collars`].
    pub fn extend_over_collars(&self, h: &CellularAutomorphism) -> Result<CellularAutomorphism, CellularError> {
        let expected = self.complex.face_count() - self.annuli.len();
        if h.faces.len() != expected {
            return Err(CellularError::WrongSize { kind: "face", expected, got: h.faces.len() });
        }
        if h.edges.len() != self.complex.edge_count() {
            return Err(CellularError::WrongSize { kind: "edge", expected: self.complex.edge_count(), got: h.edges.len() });
        }
        let mut extended = h.clone();
        for &a in &self.annuli {
            let mapped = h.side(self.complex.face(a)[0]);
            let target = self
                .annuli
                .iter()
                .find_map(|&b| {
                    let side = self.complex.face(b).iter().find(|side| side.edge == mapped.edge)?;
                    Some((b, side.forward == mapped.forward))
                })
                .ok_or(CellularError::PreconditionFailed("the map moves a boundary edge inside the surface".into()))?;
            extended.faces.push(target);
        }
        self.check_automorphism(&extended)?;
        Ok(extended)
    }

    /// All automorphisms of the partition.
    pub fn automorphisms(&self) -> Vec<CellularAutomorphism> {
        automorphisms(&self.complex).into_iter().filter(|h| self.check_automorphism(h).is_ok()).collect()
    }
}

/// Shrinks every boundary circle to a point. Each annulus becomes an open
/// disk containing the marked point.
pub fn shrink_boundary(p: &CellPartition) -> Result<CellPartition, CellularError> {
    if !p.complex.is_closed() {
        return Err(CellularError::BoundaryNotInAnnuli);
    }
    let mut marked: BTreeSet<usize> = p.marked.iter().copied().collect();
    marked.extend(p.annuli.iter().copied());
    Ok(CellPartition { complex: p.complex.clone(), annuli: Vec::new(), marked: marked.into_iter().collect() })
}

/// The partition of a canonical neighbourhood by a critical component,
/// with the refined cells each new cell is made of.
#[derive(Clone, Debug)]
pub struct DeltaPartition {
    pub partition: CellPartition,
    /// Refined vertex of each 0-cell.
    pub vertices: Vec<usize>,
    /// Refined path of each 1-cell, from its first endpoint to its second.
    pub arcs: Vec<Vec<Side>>,
    /// Refined faces of each 2-cell.
    pub regions: Vec<Vec<usize>>,
}

fn arc_path(s: &SurfaceComplex, edges: &[usize], start: usize) -> Vec<Side> {
    let mut left: Vec<usize> = edges.to_vec();
    let mut at = start;
    let mut path = Vec::with_capacity(edges.len());
    while !left.is_empty() {
        let Some(pos) = left.iter().position(|&e| s.endpoints(e).contains(&at)) else { break };
        let e = left.swap_remove(pos);
        let [t, h] = s.endpoints(e);
        let forward = t == at;
        path.push(Side::new(e, forward));
        at = if forward { h } else { t };
    }
    path
}

/// Builds the partition of `N̂(K)` into the critical vertices of `K`, the
/// arcs of `K` and the components of `N̂(K) \ K`.
pub fn delta_partition(atlas: &Atlas, k: usize) -> Result<DeltaPartition, CellularError> {
    let s = atlas.refined();
    let component = &atlas.foliation.components[k];
    let nbhd = &atlas.canonical[k].cells;
    if component.edges.is_empty() {
        return Err(CellularError::UnsupportedPartition("the component is a single point".into()));
    }
    let vertices: Vec<usize> = component.critical.iter().map(|c| c.vertex).collect();
    let vertex_index: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut arcs = Vec::new();
    let mut arc_ends = Vec::new();
    for leaf in &component.leaves {
        match leaf {
            Leaf::Point(_) => {}
            Leaf::Arc { edges, ends, .. } => {
                arcs.push(arc_path(s, edges, ends[0]));
                arc_ends.push([vertex_index[&ends[0]], vertex_index[&ends[1]]]);
            }
            Leaf::Circle { .. } => {
                return Err(CellularError::UnsupportedPartition("the component has a circle leaf".into()))
            }
        }
    }
    let k_edges: BTreeSet<usize> = component.edges.iter().copied().collect();
    let boundary_edges = nbhd.boundary_edges();

    // regions: faces of N̂ joined across edges that are not on K
    let faces = nbhd.faces();
    let local: HashMap<usize, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut uf = UnionFind::<usize>::new(faces.len());
    for &f in faces {
        for i in 0..s.face(f).len() {
            let e = s.face(f)[i].edge;
            if k_edges.contains(&e) {
                continue;
            }
            if let Some(c) = s.across(f, i) {
                if let Some(&j) = local.get(&c.face) {
                    uf.union(local[&f], j);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for &f in faces {
        groups.entry(uf.find(local[&f])).or_default().push(f);
    }
    let regions: Vec<Vec<usize>> = groups.into_values().collect();

    let first_side: HashMap<Side, (usize, bool)> = arcs
        .iter()
        .enumerate()
        .flat_map(|(a, path)| [(path[0], (a, true)), (path[path.len() - 1].reversed(), (a, false))])
        .collect();
    let is_k = |x: Flag| k_edges.contains(&s.face(x.face)[x.side].edge);
    let travelled = |x: Flag| {
        let side = s.face(x.face)[x.side];
        if x.start {
            side
        } else {
            side.reversed()
        }
    };
    let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut walks = Vec::with_capacity(regions.len());
    let mut annuli = Vec::new();
    for (r, region) in regions.iter().enumerate() {
        let k_sides: Vec<(usize, usize)> = region
            .iter()
            .flat_map(|&f| (0..s.face(f).len()).map(move |i| (f, i)))
            .filter(|&(f, i)| k_edges.contains(&s.face(f)[i].edge))
            .collect();
        let Some(&(f, i)) = k_sides.first() else {
            return Err(CellularError::UnsupportedPartition("a region does not meet the component".into()));
        };
        let origin = Flag { face: f, side: i, start: false };
        let mut fine = vec![s.face(f)[i]];
        visited.insert((f, i));
        let mut at = origin;
        let limit = 4 * s.face_count() * 8 + 16;
        let mut steps = 0;
        loop {
            let mut turn = s1(s, at);
            while !is_k(turn) {
                turn = s1(s, s2(s, turn).ok_or_else(|| {
                    CellularError::UnsupportedPartition("the walk around K reached the boundary".into())
                })?);
                steps += 1;
                if steps > limit {
                    return Err(CellularError::UnsupportedPartition("the walk around K does not close".into()));
                }
            }
            let next = s0(turn);
            if next == origin {
                break;
            }
            fine.push(travelled(turn));
            visited.insert((turn.face, turn.side));
            at = next;
        }
        if k_sides.iter().any(|c| !visited.contains(c)) {
            return Err(CellularError::UnsupportedPartition("a region meets K along more than one walk".into()));
        }
        // compress the fine walk into arcs, starting at a critical vertex
        let shift = fine
            .iter()
            .position(|side| first_side.contains_key(side))
            .ok_or_else(|| CellularError::UnsupportedPartition("a walk avoids the critical vertices".into()))?;
        fine.rotate_left(shift);
        let mut coarse = Vec::new();
        let mut p = 0;
        while p < fine.len() {
            let &(a, forward) = first_side
                .get(&fine[p])
                .ok_or_else(|| CellularError::UnsupportedPartition("a walk leaves an arc midway".into()))?;
            let expected: Vec<Side> = if forward {
                arcs[a].clone()
            } else {
                arcs[a].iter().rev().map(|side| side.reversed()).collect()
            };
            if fine.len() < p + expected.len() || fine[p..p + expected.len()] != expected[..] {
                return Err(CellularError::UnsupportedPartition("a walk does not follow an arc".into()));
            }
            coarse.push(Side::new(a, forward));
            p += expected.len();
        }
        walks.push(coarse);
        if region.iter().any(|&f| s.face(f).iter().any(|side| boundary_edges.contains(&side.edge))) {
            annuli.push(r);
        }
    }
    let complex = SurfaceComplex::from_parts(
        vertices.iter().map(|&v| s.vertex_label(v)).collect(),
        (1..=arcs.len() as u64).collect(),
        (1..=walks.len() as u64).collect(),
        arc_ends,
        walks,
    )?;
    let partition = CellPartition::with_annuli(complex, annuli)?;
    Ok(DeltaPartition { partition, vertices, arcs, regions })
}
