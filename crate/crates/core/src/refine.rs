//! Refinement of a complex along level sets.
//!
//! Every edge crossing a requested level is split there, and every face is cut
//! by chords joining the two points of the face boundary at that level. In the
//! result each requested level set is a subcomplex: the vertices carrying the
//! level together with the edges that are constant on it.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::complex::{Side, SurfaceComplex};
use crate::function::{FunctionError, PlFunction, Rational, Target};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VertexOrigin {
    Original(usize),
    /// A new vertex in the interior of an original edge, at the given level.
    OnEdge { edge: usize, level: Rational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeOrigin {
    /// Piece `index` (counted from the tail) of an original edge.
    Segment { edge: usize, index: usize },
    /// A chord cutting an original face.
    Chord { face: usize },
}

#[derive(Clone, Debug)]
pub struct Refinement {
    pub complex: SurfaceComplex,
    pub function: PlFunction,
    pub vertex_origin: Vec<VertexOrigin>,
    pub edge_origin: Vec<EdgeOrigin>,
    pub face_origin: Vec<usize>,
}

/// A vertex of a polygon under construction, with its lifted value.
#[derive(Clone, Debug)]
struct Corner {
    vertex: usize,
    lift: Rational,
    /// Side leaving this corner towards the next one.
    side: Side,
}

/// Refines `s` so that every level in `levels` is a subcomplex. Levels are
/// read modulo one for circle-valued functions.
pub fn refine(s: &SurfaceComplex, f: &PlFunction, levels: &[Rational]) -> Refinement {
    let levels: BTreeSet<Rational> = levels.iter().map(|l| f.normalize(l)).collect();
    let levels: Vec<Rational> = levels.into_iter().collect();

    let mut vertex_labels: Vec<u64> = s.vertex_labels().to_vec();
    let mut next_label = vertex_labels.iter().max().map_or(0, |m| m + 1);
    let mut values: Vec<Rational> = f.values().to_vec();
    let mut vertex_origin: Vec<VertexOrigin> = (0..s.vertex_count()).map(VertexOrigin::Original).collect();

    // chain[e] = vertices along edge e from tail to head, with lifts relative
    // to the tail's representative value
    let mut chains: Vec<Vec<(usize, Rational)>> = Vec::with_capacity(s.edge_count());
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut edge_origin: Vec<EdgeOrigin> = Vec::new();
    let mut segments: Vec<Vec<usize>> = Vec::with_capacity(s.edge_count());
    for e in 0..s.edge_count() {
        let [a, b] = s.endpoints(e);
        let start = f.value(a).clone();
        let end = &start + f.edge_delta(s, e);
        let (lo, hi) = if start <= end { (start.clone(), end.clone()) } else { (end.clone(), start.clone()) };
        let mut cuts: Vec<Rational> = Vec::new();
        for level in &levels {
            for l in f.lifts_between(level, &lo, &hi) {
                if l != lo && l != hi {
                    cuts.push(l);
                }
            }
        }
        cuts.sort();
        if end < start {
            cuts.reverse();
        }
        let mut chain = vec![(a, start.clone())];
        for level in cuts {
            let v = vertex_labels.len();
            vertex_labels.push(next_label);
            next_label += 1;
            values.push(f.normalize(&level));
            vertex_origin.push(VertexOrigin::OnEdge { edge: e, level: f.normalize(&level) });
            chain.push((v, level));
        }
        chain.push((b, end));
        let mut segs = Vec::with_capacity(chain.len() - 1);
        for (index, pair) in chain.windows(2).enumerate() {
            segs.push(edges.len());
            edges.push([pair[0].0, pair[1].0]);
            edge_origin.push(EdgeOrigin::Segment { edge: e, index });
        }
        chains.push(chain);
        segments.push(segs);
    }

    let mut faces: Vec<Vec<Side>> = Vec::new();
    let mut face_origin: Vec<usize> = Vec::new();
    for face in 0..s.face_count() {
        let walk = s.face(face);
        let mut polygon: Vec<Corner> = Vec::new();
        let mut lift = f.value(s.side_start(walk[0])).clone();
        for &side in walk {
            let chain = &chains[side.edge];
            let segs = &segments[side.edge];
            let n = segs.len();
            if side.forward {
                let offset = &lift - &chain[0].1;
                for i in 0..n {
                    polygon.push(Corner { vertex: chain[i].0, lift: &chain[i].1 + &offset, side: Side::new(segs[i], true) });
                }
                lift = &chain[n].1 + &offset;
            } else {
                let offset = &lift - &chain[n].1;
                for i in (0..n).rev() {
                    polygon.push(Corner {
                        vertex: chain[i + 1].0,
                        lift: &chain[i + 1].1 + &offset,
                        side: Side::new(segs[i], false),
                    });
                }
                lift = &chain[0].1 + &offset;
            }
        }
        let mut pending = vec![polygon];
        while let Some(poly) = pending.pop() {
            match find_cut(f, &levels, &poly) {
                None => {
                    faces.push(poly.iter().map(|c| c.side).collect());
                    face_origin.push(face);
                }
                Some((i, j)) => {
                    let e = edges.len();
                    edges.push([poly[i].vertex, poly[j].vertex]);
                    edge_origin.push(EdgeOrigin::Chord { face });
                    let n = poly.len();
                    let mut first: Vec<Corner> = (i..j).map(|k| poly[k].clone()).collect();
                    first.push(Corner { vertex: poly[j].vertex, lift: poly[j].lift.clone(), side: Side::new(e, false) });
                    let mut second: Vec<Corner> = (j..i + n).map(|k| poly[k % n].clone()).collect();
                    second.push(Corner { vertex: poly[i].vertex, lift: poly[i].lift.clone(), side: Side::new(e, true) });
                    pending.push(second);
                    pending.push(first);
                }
            }
        }
    }

    let edge_labels = (1..=edges.len() as u64).collect();
    let face_labels = (1..=faces.len() as u64).collect();
    let complex = SurfaceComplex::from_parts(vertex_labels, edge_labels, face_labels, edges, faces)
        .expect("refining a valid complex along levels yields a valid complex");
    Refinement { complex, function: PlFunction::new(values, f.target()), vertex_origin, edge_origin, face_origin }
}

/// Two non-adjacent corners of `poly` sharing a lifted level from `levels`
/// that lies strictly between the polygon's extremes.
fn find_cut(f: &PlFunction, levels: &[Rational], poly: &[Corner]) -> Option<(usize, usize)> {
    let n = poly.len();
    if n < 4 {
        return None;
    }
    let lo = poly.iter().map(|c| &c.lift).min()?;
    let hi = poly.iter().map(|c| &c.lift).max()?;
    for i in 0..n {
        let l = &poly[i].lift;
        if l == lo || l == hi || !is_level(f, levels, l) {
            continue;
        }
        for j in i + 2..n {
            if (j + 1) % n == i {
                continue;
            }
            if &poly[j].lift == l {
                return Some((i, j));
            }
        }
    }
    None
}

fn is_level(f: &PlFunction, levels: &[Rational], lift: &Rational) -> bool {
    levels.binary_search(&f.normalize(lift)).is_ok()
}

/// Refines at a single regular level.
pub fn slice(s: &SurfaceComplex, f: &PlFunction, c: &Rational) -> Result<Refinement, FunctionError> {
    let c = f.normalize(c);
    for cv in crate::function::critical_vertices(s, f)? {
        if f.value(cv.vertex) == &c {
            return Err(FunctionError::CriticalLevel { level: crate::function::format_rational(&c) });
        }
    }
    Ok(refine(s, f, &[c]))
}

impl Refinement {
    /// Vertices and constant edges at level `c`.
    pub fn level_cells(&self, c: &Rational) -> (Vec<usize>, Vec<usize>) {
        let c = self.function.normalize(c);
        let s = &self.complex;
        let vertices: Vec<usize> = (0..s.vertex_count()).filter(|&v| self.function.value(v) == &c).collect();
        let edges: Vec<usize> = (0..s.edge_count())
            .filter(|&e| {
                let [a, _] = s.endpoints(e);
                self.function.value(a) == &c && self.function.edge_delta(s, e).is_zero()
            })
            .collect();
        (vertices, edges)
    }

    /// Connected components of the level set at `c`, each given by its
    /// vertices and edges.
    pub fn level_components(&self, c: &Rational) -> Vec<(Vec<usize>, Vec<usize>)> {
        let (vertices, edges) = self.level_cells(c);
        let s = &self.complex;
        let mut uf = petgraph::unionfind::UnionFind::<usize>::new(s.vertex_count());
        for &e in &edges {
            let [a, b] = s.endpoints(e);
            uf.union(a, b);
        }
        let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
        for &v in &vertices {
            groups.entry(uf.find(v)).or_default().0.push(v);
        }
        for &e in &edges {
            groups.entry(uf.find(s.endpoints(e)[0])).or_default().1.push(e);
        }
        groups.into_values().collect()
    }

    /// The range of lifted values over face `face`.
    pub fn face_range(&self, face: usize) -> (Rational, Rational) {
        let lifts = self.function.face_lifts(&self.complex, face);
        let lo = lifts.iter().min().cloned().unwrap_or_else(Rational::zero);
        let hi = lifts.iter().max().cloned().unwrap_or_else(Rational::zero);
        (lo, hi)
    }

    /// Value of `f` at the middle of the range of face `face`, normalized.
    pub fn face_midpoint(&self, face: usize) -> Rational {
        let (lo, hi) = self.face_range(face);
        let two = Rational::one() + Rational::one();
        self.function.normalize(&((lo + hi) / two))
    }

    /// Original vertex, if this vertex was already present before refining.
    pub fn original_vertex(&self, v: usize) -> Option<usize> {
        match self.vertex_origin[v] {
            VertexOrigin::Original(o) => Some(o),
            VertexOrigin::OnEdge { .. } => None,
        }
    }

    pub fn target(&self) -> Target {
        self.function.target()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::function::validate_axioms;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn one_triangle_splits_into_quad_and_triangle() {
        let s = fixtures::polygon_complex(3, &[vec![0, 1, 2]]).unwrap();
        let f = PlFunction::from_integers(&[0, 1, 2]);
        // boundary is not level, so slice the raw geometry directly
        let r = refine(&s, &f, &[q(3, 2)]);
        assert_eq!(r.complex.vertex_count(), 5);
        assert_eq!(r.complex.face_count(), 2);
        let mut sizes: Vec<usize> = (0..2).map(|face| r.complex.face(face).len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 4]);
        assert_eq!(r.complex.euler_characteristic(), 1);
    }

    #[test]
    fn torus_mid_level_is_two_circles() {
        let s = fixtures::torus_grid(4, 4);
        let f = fixtures::torus_height(4, 4);
        validate_axioms(&s, &f).unwrap();
        // between the two saddle levels 4 and 80
        let r = slice(&s, &f, &q(41, 1)).unwrap();
        assert_eq!(r.complex.classify().unwrap(), s.classify().unwrap());
        let comps = r.level_components(&q(41, 1));
        assert_eq!(comps.len(), 2);
        for (vs, es) in &comps {
            assert_eq!(vs.len(), es.len());
        }
    }

    #[test]
    fn saddle_level_is_rejected() {
        let s = fixtures::torus_grid(4, 4);
        let f = fixtures::torus_height(4, 4);
        let saddle = crate::function::critical_vertices(&s, &f)
            .unwrap()
            .into_iter()
            .find(|c| matches!(c.kind, crate::function::VertexKind::Saddle(_)))
            .unwrap();
        let c = f.value(saddle.vertex).clone();
        assert!(matches!(slice(&s, &f, &c), Err(FunctionError::CriticalLevel { .. })));
    }

    #[test]
    fn circle_valued_refinement_cuts_every_lift() {
        // rotation-like function on a torus: value = column / 4 mod 1
        let s = fixtures::torus_grid(3, 4);
        let values: Vec<Rational> = (0..12).map(|v| q((v % 4) as i64, 4) + q((v / 4) as i64, 100)).collect();
        let f = PlFunction::new(values, Target::Circle);
        validate_axioms(&s, &f).unwrap();
        let r = refine(&s, &f, &[q(1, 8)]);
        assert!(r.complex.classify().unwrap().euler_char == 0);
        assert!(!r.level_cells(&q(1, 8)).1.is_empty());
    }
}
