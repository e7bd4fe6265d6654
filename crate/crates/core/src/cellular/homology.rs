//! Homology with coefficients in a large prime field.
//!
//! Working modulo `p = 2^31 - 1` keeps every operation exact and cheap. For
//! a surface the only torsion is a `Z/2` in the first homology of a
//! non-orientable closed surface, which any odd prime ignores, so Betti
//! numbers and traces agree with the rational ones. Traces of maps induced by
//! signed permutations are small integers and are read back symmetrically.

use super::chain::{ChainComplex, ChainMap};
use super::partition::CellPartition;
use super::CellularError;

pub const PRIME: u64 = 2_147_483_647;

fn reduce(x: i64) -> u64 {
    x.rem_euclid(PRIME as i64) as u64
}

fn lift(x: u64) -> i64 {
    if x > PRIME / 2 {
        x as i64 - PRIME as i64
    } else {
        x as i64
    }
}

fn mul(a: u64, b: u64) -> u64 {
    a * b % PRIME
}

fn sub(a: u64, b: u64) -> u64 {
    (a + PRIME - b) % PRIME
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    debug_assert_ne!(a, 0);
    pow(a, PRIME - 2)
}

/// Reduced row echelon form in place, pivoting only among the first `cols`
/// columns; returns the pivot columns.
fn rref(m: &mut [Vec<u64>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, p);
        let scale = inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = mul(*x, scale);
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && other[col] != 0 {
                let factor = other[col];
                for (x, &y) in other.iter_mut().zip(&pivot_row) {
                    *x = sub(*x, mul(factor, y));
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

fn kernel(m: &[Vec<i64>], cols: usize) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| reduce(x)).collect()).collect();
    let pivots = rref(&mut a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; cols];
            v[f] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = sub(0, a[r][f]);
            }
            v
        })
        .collect()
}

fn image(m: &[Vec<i64>], rows: usize, cols: usize) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| reduce(x)).collect()).collect();
    let pivots = rref(&mut a, cols);
    pivots.iter().map(|&c| (0..rows).map(|r| reduce(m[r][c])).collect()).collect()
}

/// Incremental independence test.
struct Echelon {
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (p, row) in &self.rows {
            if v[*p] != 0 {
                let factor = v[*p];
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = sub(*x, mul(factor, y));
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<u64>) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|&x| x != 0) else { return false };
        let scale = inv(v[p]);
        let v: Vec<u64> = v.into_iter().map(|x| mul(x, scale)).collect();
        for (_, row) in self.rows.iter_mut() {
            if row[p] != 0 {
                let factor = row[p];
                for (x, &y) in row.iter_mut().zip(&v) {
                    *x = sub(*x, mul(factor, y));
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// A basis of `Z_k` adapted to `B_k`, with what is needed to read off
/// coordinates of cycles.
#[derive(Clone, Debug)]
struct Degree {
    boundaries: usize,
    /// Cycle representatives of a basis of `H_k`.
    classes: Vec<Vec<u64>>,
    /// Rows on which the adapted basis matrix is invertible.
    rows: Vec<usize>,
    /// Inverse of the adapted basis matrix restricted to `rows`.
    inverse: Vec<Vec<u64>>,
}

impl Degree {
    fn new(n: usize, cycles: Vec<Vec<u64>>, boundaries: Vec<Vec<u64>>) -> Degree {
        let mut ech = Echelon { rows: Vec::new() };
        let mut basis = Vec::new();
        for b in boundaries {
            if ech.insert(b.clone()) {
                basis.push(b);
            }
        }
        let nb = basis.len();
        let mut classes = Vec::new();
        for z in cycles {
            if ech.insert(z.clone()) {
                classes.push(z.clone());
                basis.push(z);
            }
        }
        let m = basis.len();
        // rows of the n x m basis matrix: pick m independent ones
        let mut transposed: Vec<Vec<u64>> = basis.clone();
        let rows = rref(&mut transposed, n);
        let mut square: Vec<Vec<u64>> = rows.iter().map(|&r| (0..m).map(|c| basis[c][r]).collect()).collect();
        let mut augmented: Vec<Vec<u64>> = square
            .iter_mut()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..m).map(|j| u64::from(i == j)));
                r
            })
            .collect();
        rref(&mut augmented, m);
        let inverse = augmented.into_iter().map(|r| r[m..].to_vec()).collect();
        Degree { boundaries: nb, classes, rows, inverse }
    }

    /// Coordinates of a cycle along the homology classes.
    fn coordinates(&self, z: &[u64]) -> Vec<u64> {
        let picked: Vec<u64> = self.rows.iter().map(|&r| z[r]).collect();
        self.inverse[self.boundaries..]
            .iter()
            .map(|row| row.iter().zip(&picked).fold(0, |acc, (&a, &b)| (acc + mul(a, b)) % PRIME))
            .collect()
    }
}

/// Homology of a chain complex over the prime field.
#[derive(Clone, Debug)]
pub struct Homology {
    degrees: [Degree; 3],
}

impl Homology {
    pub fn compute(cc: &ChainComplex) -> Homology {
        let [n0, n1, n2] = cc.dims;
        let z0: Vec<Vec<u64>> = (0..n0).map(|i| (0..n0).map(|j| u64::from(i == j)).collect()).collect();
        let z1 = kernel(&cc.dense(1), n1);
        let z2 = kernel(&cc.dense(2), n2);
        let b0 = image(&cc.dense(1), n0, n1);
        let b1 = image(&cc.dense(2), n1, n2);
        Homology { degrees: [Degree::new(n0, z0, b0), Degree::new(n1, z1, b1), Degree::new(n2, z2, Vec::new())] }
    }

    pub fn betti(&self) -> [usize; 3] {
        [self.degrees[0].classes.len(), self.degrees[1].classes.len(), self.degrees[2].classes.len()]
    }

    /// Matrix of the induced map on `H_k`, entries read as small integers.
    pub fn induced_matrix(&self, cm: &ChainMap, k: usize) -> Vec<Vec<i64>> {
        let d = &self.degrees[k];
        let mut cols = Vec::with_capacity(d.classes.len());
        for z in &d.classes {
            let mut image = vec![0u64; z.len()];
            for (i, &c) in z.iter().enumerate() {
                if c != 0 {
                    let (j, s) = cm.maps[k][i];
                    image[j] = (image[j] + mul(c, reduce(s))) % PRIME;
                }
            }
            cols.push(d.coordinates(&image));
        }
        let b = d.classes.len();
        (0..b).map(|r| (0..b).map(|c| lift(cols[c][r])).collect()).collect()
    }

    pub fn trace(&self, cm: &ChainMap, k: usize) -> i64 {
        let m = self.induced_matrix(cm, k);
        lift((0..m.len()).fold(0, |acc, i| (acc + reduce(m[i][i])) % PRIME))
    }

    pub fn lefschetz(&self, cm: &ChainMap) -> i64 {
        self.trace(cm, 0) - self.trace(cm, 1) + self.trace(cm, 2)
    }

    pub fn acts_trivially(&self, cm: &ChainMap, k: usize) -> bool {
        let m = self.induced_matrix(cm, k);
        m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }
}

pub fn betti_numbers(p: &CellPartition) -> Result<[usize; 3], CellularError> {
    Ok(Homology::compute(&super::chain::chain_complex(p)?).betti())
}

/// Alternating sum of traces of the maps induced on homology.
pub fn lefschetz_homology(p: &CellPartition, cm: &ChainMap) -> Result<i64, CellularError> {
    Ok(Homology::compute(&super::chain::chain_complex(p)?).lefschetz(cm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellular::chain::{induced_chain_map, lefschetz_chain};
    use crate::cellular::enumerate::automorphisms;
    use crate::fixtures;

    fn betti(s: &crate::SurfaceComplex) -> [usize; 3] {
        betti_numbers(&CellPartition::from_complex(s)).unwrap()
    }

    #[test]
    fn betti_numbers_of_fixtures() {
        assert_eq!(betti(&fixtures::tetrahedron()), [1, 0, 1]);
        assert_eq!(betti(&fixtures::torus_grid(4, 4)), [1, 2, 1]);
        assert_eq!(betti(&fixtures::klein_grid(3, 4)), [1, 1, 0]);
        assert_eq!(betti(&fixtures::hemicube()), [1, 0, 0]);
    }

    #[test]
    fn hopf_trace_on_the_torus() {
        let s = fixtures::torus_grid(4, 4);
        let p = CellPartition::from_complex(&s);
        for h in automorphisms(&s) {
            let cm = induced_chain_map(&p, &h).unwrap();
            assert_eq!(lefschetz_chain(&cm), lefschetz_homology(&p, &cm).unwrap());
        }
    }

    #[test]
    fn field_inverse() {
        for a in [1u64, 2, 3, 12345, PRIME - 1] {
            assert_eq!(mul(a, inv(a)), 1);
        }
        assert_eq!(lift(reduce(-3)), -3);
    }
}
