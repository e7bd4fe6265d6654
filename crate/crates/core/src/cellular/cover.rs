//! The orientation double cover of a closed non-orientable partition.
//!
//! Each face has two lifts, one per local orientation: sheet `+` runs along
//! the stored walk and sheet `-` runs against it. Two lifted faces are glued
//! along a lift of a shared edge exactly when they traverse it in opposite
//! directions, which makes the cover oriented by the sheet walks.

use petgraph::unionfind::UnionFind;

use crate::complex::{EdgeEnd, End, Side, SurfaceComplex};

use super::partition::CellPartition;
use super::{CellularAutomorphism, CellularError};

#[derive(Clone, Debug)]
pub struct DoubleCover {
    pub partition: CellPartition,
    /// Base cell of each lifted vertex, edge and face.
    pub vertex_base: Vec<usize>,
    pub edge_base: Vec<usize>,
    /// Lifted face `2f` runs along face `f`, lifted face `2f + 1` against it.
    pub face_base: Vec<usize>,
    /// Lifted edge at position `i` of lifted face `F`.
    edge_at: Vec<Vec<usize>>,
}

impl DoubleCover {
    fn lifted_face_walk(s: &SurfaceComplex, f: usize, sheet: bool) -> Vec<Side> {
        if sheet {
            s.face(f).to_vec()
        } else {
            s.face(f).iter().rev().map(|side| side.reversed()).collect()
        }
    }

    /// The sheet swap. It reverses the orientation of the cover.
    pub fn deck(&self) -> CellularAutomorphism {
        let cover = self.partition.complex();
        let mut vertices = vec![usize::MAX; cover.vertex_count()];
        let edges: Vec<(usize, bool)> = (0..cover.edge_count()).map(|e| (e ^ 1, true)).collect();
        for (e, &(other, _)) in edges.iter().enumerate() {
            let [t, h] = cover.endpoints(e);
            let [ot, oh] = cover.endpoints(other);
            vertices[t] = ot;
            vertices[h] = oh;
        }
        let faces = (0..cover.face_count()).map(|f| (f ^ 1, false)).collect();
        CellularAutomorphism { vertices, edges, faces }
    }

    /// Lift of `h` preserving the orientation of the cover.
    pub fn lift(&self, base: &CellPartition, h: &CellularAutomorphism) -> Result<CellularAutomorphism, CellularError> {
        base.check_automorphism(h)?;
        let cover = self.partition.complex();
        let mut faces = Vec::with_capacity(cover.face_count());
        let mut edges = vec![(usize::MAX, true); cover.edge_count()];
        let mut vertices = vec![usize::MAX; cover.vertex_count()];
        for lifted in 0..cover.face_count() {
            let f = lifted / 2;
            let sheet = lifted % 2 == 0;
            let (g, keeps) = h.faces[f];
            let image_sheet = sheet == keeps;
            let image = 2 * g + usize::from(!image_sheet);
            faces.push((image, true));
            let walk = cover.face(lifted);
            let image_walk = cover.face(image);
            for (i, &side) in walk.iter().enumerate() {
                let base_side = Side::new(self.edge_base[side.edge], side.forward);
                let mapped = h.side(base_side);
                let j = image_walk
                    .iter()
                    .position(|t| self.edge_base[t.edge] == mapped.edge && t.forward == mapped.forward)
                    .ok_or(CellularError::FaceIncidence { face: lifted })?;
                let e_img = self.edge_at[image][j];
                let (_, sign) = h.edges[self.edge_base[side.edge]];
                let e = self.edge_at[lifted][i];
                edges[e] = (e_img, sign);
                let [t, hd] = cover.endpoints(e);
                let [ti, hi] = cover.endpoints(e_img);
                let (a, b) = if sign { (ti, hi) } else { (hi, ti) };
                vertices[t] = a;
                vertices[hd] = b;
            }
        }
        let lifted = CellularAutomorphism { vertices, edges, faces };
        lifted.validate(cover)?;
        Ok(lifted)
    }
}

/// Builds the orientation double cover of a closed non-orientable partition.
pub fn orientation_double_cover(p: &CellPartition) -> Result<DoubleCover, CellularError> {
    let s = p.complex();
    if s.is_orientable() {
        return Err(CellularError::AlreadyOrientable);
    }
    if !s.is_closed() {
        return Err(CellularError::PreconditionFailed("the double cover needs a closed surface".into()));
    }
    let nf = s.face_count();
    let walks: Vec<Vec<Side>> = (0..2 * nf).map(|l| DoubleCover::lifted_face_walk(s, l / 2, l % 2 == 0)).collect();
    // lifted edge at each position of each lifted face
    let mut edge_at: Vec<Vec<usize>> = walks.iter().map(|w| vec![usize::MAX; w.len()]).collect();
    let mut edge_base = Vec::with_capacity(2 * s.edge_count());
    let pos_in_sheet = |f: usize, i: usize, sheet: bool| if sheet { i } else { s.face(f).len() - 1 - i };
    for e in 0..s.edge_count() {
        let [c1, c2] = s.sides_of(e) else { unreachable!("closed surfaces have two sides per edge") };
        let d1 = s.face(c1.face)[c1.index].forward;
        let d2 = s.face(c2.face)[c2.index].forward;
        for sheet1 in [true, false] {
            let eff1 = d1 == sheet1;
            let sheet2 = d2 == !eff1;
            let lifted = edge_base.len();
            edge_base.push(e);
            edge_at[2 * c1.face + usize::from(!sheet1)][pos_in_sheet(c1.face, c1.index, sheet1)] = lifted;
            edge_at[2 * c2.face + usize::from(!sheet2)][pos_in_sheet(c2.face, c2.index, sheet2)] = lifted;
        }
    }
    // vertices: union the edge ends meeting at each corner of each lifted face
    let node = |end: EdgeEnd| 2 * end.edge + usize::from(end.end == End::Head);
    let mut uf = UnionFind::<usize>::new(2 * edge_base.len());
    for (l, walk) in walks.iter().enumerate() {
        let n = walk.len();
        for i in 0..n {
            let (a, b) = (walk[i], walk[(i + 1) % n]);
            let arrive = EdgeEnd { edge: edge_at[l][i], end: if a.forward { End::Head } else { End::Tail } };
            let leave = EdgeEnd { edge: edge_at[l][(i + 1) % n], end: if b.forward { End::Tail } else { End::Head } };
            uf.union(node(arrive), node(leave));
        }
    }
    let mut class_index = std::collections::HashMap::new();
    let mut vertex_base = Vec::new();
    let mut edges = Vec::with_capacity(edge_base.len());
    for (lifted, &e) in edge_base.iter().enumerate() {
        let [t, h] = s.endpoints(e);
        let mut vertex = |end: End, base: usize| {
            let root = uf.find(node(EdgeEnd { edge: lifted, end }));
            *class_index.entry(root).or_insert_with(|| {
                vertex_base.push(base);
                vertex_base.len() - 1
            })
        };
        let a = vertex(End::Tail, t);
        let b = vertex(End::Head, h);
        edges.push([a, b]);
    }
    let faces: Vec<Vec<Side>> = walks
        .iter()
        .enumerate()
        .map(|(l, walk)| walk.iter().enumerate().map(|(i, side)| Side::new(edge_at[l][i], side.forward)).collect())
        .collect();
    let complex = SurfaceComplex::from_parts(
        (1..=vertex_base.len() as u64).collect(),
        (1..=edge_base.len() as u64).collect(),
        (1..=faces.len() as u64).collect(),
        edges,
        faces,
    )?;
    let annuli = p.annuli().iter().flat_map(|&a| [2 * a, 2 * a + 1]);
    let partition = CellPartition::with_annuli(complex, annuli)?;
    let face_base = (0..2 * nf).map(|l| l / 2).collect();
    Ok(DoubleCover { partition, vertex_base, edge_base, face_base, edge_at })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn klein_bottle_covers_torus() {
        let p = CellPartition::from_complex(&fixtures::klein_grid(3, 4));
        let cover = orientation_double_cover(&p).unwrap();
        let c = cover.partition.complex();
        assert!(c.is_orientable());
        assert!(c.is_closed());
        assert!(c.is_connected());
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(c.classify().unwrap().genus_or_crosscaps, 1);
    }

    #[test]
    fn projective_plane_covers_sphere() {
        let p = CellPartition::from_complex(&fixtures::hemicube());
        let cover = orientation_double_cover(&p).unwrap();
        assert_eq!(cover.partition.euler_characteristic(), 2);
        assert!(cover.partition.complex().is_orientable());
    }

    #[test]
    fn orientable_input_is_rejected() {
        let p = CellPartition::from_complex(&fixtures::torus_grid(3, 3));
        assert!(matches!(orientation_double_cover(&p), Err(CellularError::AlreadyOrientable)));
    }

    #[test]
    fn every_automorphism_lifts() {
        let p = CellPartition::from_complex(&fixtures::hemicube());
        let cover = orientation_double_cover(&p).unwrap();
        for h in p.automorphisms() {
            let lifted = cover.lift(&p, &h).unwrap();
            assert_eq!(lifted.preserves_orientation(cover.partition.complex()), Some(true));
        }
    }
}
