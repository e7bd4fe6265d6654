//! Flags and brute-force enumeration of automorphisms.
//!
//! A flag is a face together with one of its sides and one end of that side.
//! Three involutions act on flags: `s0` switches the end, `s1` moves to the
//! neighbouring side of the same face at the same vertex, and `s2` crosses
//! the edge into the neighbouring face. An automorphism of a connected
//! complex commutes with all three, so it is fixed by the image of a single
//! flag; trying every target flag finds all of them.

use std::collections::VecDeque;

use crate::complex::{EdgeEnd, End, Side, SurfaceComplex};

use super::CellularAutomorphism;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    pub face: usize,
    pub side: usize,
    /// `true` at the vertex where the side starts in the face's direction.
    pub start: bool,
}

/// Dense numbering of the flags of a complex.
#[derive(Clone, Debug)]
pub struct FlagIndex {
    offsets: Vec<usize>,
    total: usize,
}

impl FlagIndex {
    pub fn new(s: &SurfaceComplex) -> FlagIndex {
        let mut offsets = Vec::with_capacity(s.face_count());
        let mut total = 0;
        for f in 0..s.face_count() {
            offsets.push(total);
            total += 2 * s.face(f).len();
        }
        FlagIndex { offsets, total }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn index(&self, x: Flag) -> usize {
        self.offsets[x.face] + 2 * x.side + usize::from(!x.start)
    }

    pub fn flag(&self, i: usize) -> Flag {
        let face = self.offsets.partition_point(|&o| o <= i) - 1;
        let r = i - self.offsets[face];
        Flag { face, side: r / 2, start: r.is_multiple_of(2) }
    }
}

pub fn all_flags(s: &SurfaceComplex) -> Vec<Flag> {
    let mut out = Vec::new();
    for f in 0..s.face_count() {
        for side in 0..s.face(f).len() {
            out.push(Flag { face: f, side, start: true });
            out.push(Flag { face: f, side, start: false });
        }
    }
    out
}

pub fn flag_side(s: &SurfaceComplex, x: Flag) -> Side {
    s.face(x.face)[x.side]
}

/// The edge end the flag sits at.
pub fn flag_end(s: &SurfaceComplex, x: Flag) -> EdgeEnd {
    let side = flag_side(s, x);
    let at_tail = side.forward == x.start;
    EdgeEnd { edge: side.edge, end: if at_tail { End::Tail } else { End::Head } }
}

pub fn flag_vertex(s: &SurfaceComplex, x: Flag) -> usize {
    s.end_vertex(flag_end(s, x))
}

pub fn s0(x: Flag) -> Flag {
    Flag { start: !x.start, ..x }
}

pub fn s1(s: &SurfaceComplex, x: Flag) -> Flag {
    let n = s.face(x.face).len();
    if x.start {
        Flag { face: x.face, side: (x.side + n - 1) % n, start: false }
    } else {
        Flag { face: x.face, side: (x.side + 1) % n, start: true }
    }
}

/// Crosses the edge; `None` on the boundary.
pub fn s2(s: &SurfaceComplex, x: Flag) -> Option<Flag> {
    let end = flag_end(s, x);
    let other = s.across(x.face, x.side)?;
    let side = s.face(other.face)[other.index];
    let start = side.forward == (end.end == End::Tail);
    Some(Flag { face: other.face, side: other.index, start })
}

/// Image of a flag under a cell map, if the map pins it down.
pub fn image_flag(s: &SurfaceComplex, h: &CellularAutomorphism, x: Flag) -> Option<Flag> {
    let side = flag_side(s, x);
    let (g, face_forward) = h.faces[x.face];
    let image = h.side(side);
    let want = if face_forward { image } else { image.reversed() };
    let j = s.face(g).iter().position(|&t| t == want)?;
    let end = flag_end(s, x);
    let (_, edge_forward) = h.edges[side.edge];
    let image_end = if edge_forward { end.end } else { end.end.opposite() };
    let at_tail = image_end == End::Tail;
    Some(Flag { face: g, side: j, start: want.forward == at_tail })
}

/// The automorphism sending `base` to `target`, if there is one.
pub fn extend(s: &SurfaceComplex, base: Flag, target: Flag) -> Option<CellularAutomorphism> {
    let index = FlagIndex::new(s);
    let mut image: Vec<Option<Flag>> = vec![None; index.len()];
    let mut used = vec![false; index.len()];
    image[index.index(base)] = Some(target);
    used[index.index(target)] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        let y = image[index.index(x)].unwrap();
        let moves = [(Some(s0(x)), Some(s0(y))), (Some(s1(s, x)), Some(s1(s, y))), (s2(s, x), s2(s, y))];
        for pair in moves {
            match pair {
                (None, None) => {}
                (Some(nx), Some(ny)) => match image[index.index(nx)] {
                    Some(existing) if existing != ny => return None,
                    Some(_) => {}
                    None => {
                        if std::mem::replace(&mut used[index.index(ny)], true) {
                            return None;
                        }
                        image[index.index(nx)] = Some(ny);
                        queue.push_back(nx);
                    }
                },
                _ => return None,
            }
        }
    }
    let mut vertices = vec![usize::MAX; s.vertex_count()];
    let mut edges = vec![(usize::MAX, true); s.edge_count()];
    let mut faces = vec![(usize::MAX, true); s.face_count()];
    for i in 0..index.len() {
        let x = index.flag(i);
        let y = image[i]?;
        let (ex, ey) = (flag_end(s, x), flag_end(s, y));
        let (v, w) = (s.end_vertex(ex), s.end_vertex(ey));
        if vertices[v] != usize::MAX && vertices[v] != w {
            return None;
        }
        vertices[v] = w;
        let edge = (ey.edge, ex.end == ey.end);
        if edges[ex.edge].0 != usize::MAX && edges[ex.edge] != edge {
            return None;
        }
        edges[ex.edge] = edge;
        let face = (y.face, x.start == y.start);
        if faces[x.face].0 != usize::MAX && faces[x.face] != face {
            return None;
        }
        faces[x.face] = face;
    }
    let h = CellularAutomorphism { vertices, edges, faces };
    h.validate(s).ok()?;
    Some(h)
}

/// Every automorphism of a connected complex, identity first.
pub fn automorphisms(s: &SurfaceComplex) -> Vec<CellularAutomorphism> {
    if s.face_count() == 0 {
        return Vec::new();
    }
    let base = Flag { face: 0, side: 0, start: true };
    let mut out: Vec<CellularAutomorphism> = all_flags(s).into_iter().filter_map(|t| extend(s, base, t)).collect();
    let identity = CellularAutomorphism::identity(s);
    out.sort_by_key(|h| *h != identity);
    let mut seen = std::collections::HashSet::new();
    out.retain(|h| seen.insert(h.clone()));
    out
}
