//! Integer cellular chains and the maps induced by automorphisms.

use std::collections::BTreeMap;

use crate::complex::SurfaceComplex;

use super::partition::CellPartition;
use super::{CellularAutomorphism, CellularError};

/// A sparse integer column: `(row, coefficient)` pairs with no zeros.
pub type Column = Vec<(usize, i64)>;

/// `C_2 -> C_1 -> C_0` with the oriented cells as bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    /// Number of cells in each dimension.
    pub dims: [usize; 3],
    /// Column `e` is the boundary of edge `e`.
    pub d1: Vec<Column>,
    /// Column `f` is the boundary of face `f`.
    pub d2: Vec<Column>,
}

fn collect(entries: impl IntoIterator<Item = (usize, i64)>) -> Column {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for (r, c) in entries {
        *acc.entry(r).or_default() += c;
    }
    acc.into_iter().filter(|&(_, c)| c != 0).collect()
}

impl ChainComplex {
    pub fn of_complex(s: &SurfaceComplex) -> Result<ChainComplex, CellularError> {
        let d1 = (0..s.edge_count())
            .map(|e| {
                let [t, h] = s.endpoints(e);
                collect([(h, 1), (t, -1)])
            })
            .collect();
        let d2 = (0..s.face_count()).map(|f| collect(s.face(f).iter().map(|side| (side.edge, side.sign())))).collect();
        let cc = ChainComplex { dims: [s.vertex_count(), s.edge_count(), s.face_count()], d1, d2 };
        if !cc.squares_to_zero() {
            return Err(CellularError::InconsistentIncidence);
        }
        Ok(cc)
    }

    pub fn squares_to_zero(&self) -> bool {
        self.d2.iter().all(|col| {
            collect(col.iter().flat_map(|&(e, c)| self.d1[e].iter().map(move |&(v, d)| (v, c * d)))).is_empty()
        })
    }

    /// Dense matrix of the boundary map out of degree `k` (rows index
    /// degree `k - 1`). Degree 0 has an empty matrix.
    pub fn dense(&self, k: usize) -> Vec<Vec<i64>> {
        let (rows, cols) = match k {
            0 => return Vec::new(),
            1 => (self.dims[0], &self.d1),
            2 => (self.dims[1], &self.d2),
            _ => panic!("no boundary map out of degree {k}"),
        };
        let mut m = vec![vec![0; cols.len()]; rows];
        for (j, col) in cols.iter().enumerate() {
            for &(i, c) in col {
                m[i][j] = c;
            }
        }
        m
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims[0] as i64 - self.dims[1] as i64 + self.dims[2] as i64
    }
}

/// Boundary matrices of a cellular partition.
pub fn chain_complex(p: &CellPartition) -> Result<ChainComplex, CellularError> {
    if !p.is_cellular() {
        return Err(CellularError::NotCellular);
    }
    ChainComplex::of_complex(p.complex())
}

/// Signed permutation matrices, stored as `(image, sign)` per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub maps: [Vec<(usize, i64)>; 3],
}

impl ChainMap {
    pub fn from_automorphism(h: &CellularAutomorphism) -> ChainMap {
        let sign = |b: bool| if b { 1 } else { -1 };
        ChainMap {
            maps: [
                h.vertices.iter().map(|&v| (v, 1)).collect(),
                h.edges.iter().map(|&(e, b)| (e, sign(b))).collect(),
                h.faces.iter().map(|&(f, b)| (f, sign(b))).collect(),
            ],
        }
    }

    /// `tr h_k`.
    pub fn trace(&self, k: usize) -> i64 {
        self.maps[k].iter().enumerate().filter(|&(i, &(j, _))| i == j).map(|(_, &(_, s))| s).sum()
    }

    pub fn traces(&self) -> [i64; 3] {
        [self.trace(0), self.trace(1), self.trace(2)]
    }

    /// Applies `h_k` to a sparse chain.
    pub fn apply(&self, k: usize, chain: &[(usize, i64)]) -> Column {
        collect(chain.iter().map(|&(i, c)| {
            let (j, s) = self.maps[k][i];
            (j, s * c)
        }))
    }

    /// Dense matrix of `h_k`; column `i` is the image of cell `i`.
    pub fn matrix(&self, k: usize) -> Vec<Vec<i64>> {
        let n = self.maps[k].len();
        let mut m = vec![vec![0; n]; n];
        for (i, &(j, s)) in self.maps[k].iter().enumerate() {
            m[j][i] = s;
        }
        m
    }

    /// Checks `h_{k-1} ∘ ∂_k = ∂_k ∘ h_k` in both degrees.
    pub fn commutes_with(&self, cc: &ChainComplex) -> Result<(), CellularError> {
        for (degree, boundary) in [(1, &cc.d1), (2, &cc.d2)] {
            for (cell, col) in boundary.iter().enumerate() {
                let (image, sign) = self.maps[degree][cell];
                let lhs = collect(boundary[image].iter().map(|&(r, c)| (r, sign * c)));
                let rhs = self.apply(degree - 1, col);
                if lhs != rhs {
                    return Err(CellularError::NotChainMap { degree });
                }
            }
        }
        Ok(())
    }
}

/// The chain automorphism `{h_0, h_1, h_2}` of a cellular partition.
pub fn induced_chain_map(p: &CellPartition, h: &CellularAutomorphism) -> Result<ChainMap, CellularError> {
    let cc = chain_complex(p)?;
    h.validate(p.complex())?;
    let cm = ChainMap::from_automorphism(h);
    cm.commutes_with(&cc)?;
    Ok(cm)
}

/// `tr h_0 - tr h_1 + tr h_2`.
pub fn lefschetz_chain(cm: &ChainMap) -> i64 {
    let [t0, t1, t2] = cm.traces();
    t0 - t1 + t2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellular::enumerate::automorphisms;
    use crate::fixtures;

    #[test]
    fn boundary_squares_to_zero() {
        for s in [fixtures::tetrahedron(), fixtures::torus_grid(3, 4), fixtures::klein_grid(3, 4), fixtures::hemicube()] {
            assert!(ChainComplex::of_complex(&s).unwrap().squares_to_zero());
        }
    }

    #[test]
    fn identity_has_lefschetz_number_chi() {
        let s = fixtures::tetrahedron();
        let p = CellPartition::from_complex(&s);
        let cm = induced_chain_map(&p, &CellularAutomorphism::identity(&s)).unwrap();
        assert_eq!(cm.traces(), [4, 6, 4]);
        assert_eq!(lefschetz_chain(&cm), 2);
    }

    #[test]
    fn every_octahedron_symmetry_is_a_chain_map() {
        let s = fixtures::octahedron();
        let p = CellPartition::from_complex(&s);
        for h in automorphisms(&s) {
            induced_chain_map(&p, &h).unwrap();
        }
    }

    #[test]
    fn annulus_cells_are_not_cellular() {
        let (s, _) = crate::generate::pair_of_pants();
        let p = CellPartition::with_collars(&s);
        assert_eq!(chain_complex(&p), Err(CellularError::NotCellular));
    }
}
