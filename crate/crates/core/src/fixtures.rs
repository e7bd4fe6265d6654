//! Small named complexes used by the generators, the self-test and the tests.

use std::collections::HashMap;

use crate::complex::{CellLists, ComplexError, Side, SurfaceComplex};
use crate::function::PlFunction;

/// Builds a complex from vertex cycles. Edges are created once per unordered
/// vertex pair and oriented from the smaller to the larger index, so inputs
/// must not need loops or parallel edges.
pub fn polygon_complex(vertex_count: usize, polygons: &[Vec<usize>]) -> Result<SurfaceComplex, ComplexError> {
    let mut edge_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut faces = Vec::with_capacity(polygons.len());
    for poly in polygons {
        let mut walk = Vec::with_capacity(poly.len());
        for i in 0..poly.len() {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            let key = (a.min(b), a.max(b));
            let e = *edge_of.entry(key).or_insert_with(|| {
                edges.push([key.0, key.1]);
                edges.len() - 1
            });
            walk.push(Side::new(e, a < b));
        }
        faces.push(walk);
    }
    SurfaceComplex::from_parts(
        (0..vertex_count as u64).collect(),
        (1..=edges.len() as u64).collect(),
        (1..=faces.len() as u64).collect(),
        edges,
        faces,
    )
}

pub fn tetrahedron() -> SurfaceComplex {
    polygon_complex(4, &[vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]]).unwrap()
}

/// Octahedron with vertex 0 the north pole, 1..=4 the equator in order, 5 the
/// south pole.
pub fn octahedron() -> SurfaceComplex {
    let mut faces = Vec::new();
    for k in 0..4 {
        let (a, b) = (1 + k, 1 + (k + 1) % 4);
        faces.push(vec![0, a, b]);
        faces.push(vec![5, b, a]);
    }
    polygon_complex(6, &faces).unwrap()
}

/// Index of a pole of [`octahedron`] in any complex that keeps the original
/// vertices first (subdivisions and refinements do).
pub fn octahedron_vertex(_complex: &SurfaceComplex, pole: &str) -> usize {
    match pole {
        "north" => 0,
        "south" => 5,
        other => panic!("unknown pole {other}"),
    }
}

/// Icosahedron: 0 top, 1..=5 upper ring, 6..=10 lower ring, 11 bottom.
pub fn icosahedron() -> SurfaceComplex {
    let up = |k: usize| 1 + k % 5;
    let low = |k: usize| 6 + k % 5;
    let mut faces = Vec::new();
    for k in 0..5 {
        faces.push(vec![0, up(k), up(k + 1)]);
        faces.push(vec![up(k), low(k), up(k + 1)]);
        faces.push(vec![up(k + 1), low(k), low(k + 1)]);
        faces.push(vec![11, low(k + 1), low(k)]);
    }
    polygon_complex(12, &faces).unwrap()
}

/// `rows x cols` quadrilateral grid with both directions wrapped.
pub fn torus_grid(rows: usize, cols: usize) -> SurfaceComplex {
    let v = |i: usize, j: usize| (i % rows) * cols + j % cols;
    let mut faces = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            faces.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)]);
        }
    }
    polygon_complex(rows * cols, &faces).unwrap()
}

/// Height-like function on [`torus_grid`]: a sum of one-minimum,
/// one-maximum profiles around each wrap, giving a minimum, two saddles and a
/// maximum at four distinct levels.
pub fn torus_height(rows: usize, cols: usize) -> PlFunction {
    let profile = |k: usize, n: usize| -> i64 {
        if 2 * k <= n {
            2 * k as i64
        } else {
            2 * (n - k) as i64 - 1
        }
    };
    let scale = 10 * rows as i64;
    let values: Vec<i64> = (0..rows * cols).map(|v| profile(v / cols, rows) + scale * profile(v % cols, cols)).collect();
    PlFunction::from_integers(&values)
}

/// Grid with rows wrapped straight and columns wrapped with a flip.
pub fn klein_grid(rows: usize, cols: usize) -> SurfaceComplex {
    let v = |i: usize, j: usize| {
        if j == cols {
            ((rows - i % rows) % rows) * cols
        } else {
            (i % rows) * cols + j
        }
    };
    let mut faces = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            faces.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)]);
        }
    }
    polygon_complex(rows * cols, &faces).unwrap()
}

/// Antipodal quotient of the cube: 4 vertices, 6 edges, 3 squares.
pub fn hemicube() -> SurfaceComplex {
    polygon_complex(4, &[vec![0, 1, 2, 3], vec![0, 2, 1, 3], vec![0, 1, 3, 2]]).unwrap()
}

/// Cell lists of two complexes side by side, relabelled apart.
pub fn disjoint_union(a: &SurfaceComplex, b: &SurfaceComplex) -> CellLists {
    let la = a.to_cell_lists();
    let lb = b.to_cell_lists();
    let voff = la.vertices.iter().max().map_or(0, |m| m + 1);
    let eoff = la.edges.iter().map(|e| e.0).max().unwrap_or(0);
    let foff = la.faces.iter().map(|f| f.0).max().map_or(0, |m| m + 1);
    let mut out = la.clone();
    out.vertices.extend(lb.vertices.iter().map(|v| v + voff));
    out.edges.extend(lb.edges.iter().map(|&(e, x, y)| (e + eoff, x + voff, y + voff)));
    out.faces.extend(lb.faces.iter().map(|(f, sides)| {
        let shifted = sides.iter().map(|&s| if s > 0 { s + eoff as i64 } else { s - eoff as i64 }).collect();
        (f + foff, shifted)
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn platonic_counts() {
        let i = icosahedron();
        assert_eq!((i.vertex_count(), i.edge_count(), i.face_count()), (12, 30, 20));
        assert!(i.classify().unwrap().is_sphere());
        let o = octahedron();
        assert_eq!((o.vertex_count(), o.edge_count(), o.face_count()), (6, 12, 8));
        assert!(hemicube().classify().unwrap().is_projective_plane());
    }
}
