//! Polygonal cell complexes of compact surfaces.
//!
//! A complex is a set of vertices, edges (with an ordered endpoint pair,
//! possibly a loop) and faces. A face is a closed walk of directed edge
//! *sides*; an edge used by one side lies on the boundary, an edge used by two
//! sides is interior. Faces may have any length, and one face may use the same
//! edge twice, so identification polygons such as the one-square torus are
//! valid inputs.
//!
//! Internally everything is indexed densely from zero; the caller's ids are
//! kept as labels and only show up again in error messages and serialization.

use std::collections::{BTreeSet, HashMap, VecDeque};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: &'static str, id: i64 },
    #[error("{kind} id {id} is referenced but not declared")]
    UnknownId { kind: &'static str, id: i64 },
    #[error("edge ids must be positive so that signs can encode direction (got {0})")]
    NonPositiveEdgeId(u64),
    #[error("face ids must be positive so that signs can encode orientation (got {0})")]
    NonPositiveFaceId(u64),
    #[error("face {face} has no sides")]
    EmptyFace { face: u64 },
    #[error("face {face} is not a closed walk (break after side {position})")]
    BrokenFaceCycle { face: u64, position: usize },
    #[error("edge {edge} has {sides} face sides")]
    NonManifoldEdge { edge: u64, sides: usize },
    #[error("edge {edge} is not used by any face")]
    DanglingEdge { edge: u64 },
    #[error("vertex {vertex} has no incident edges")]
    IsolatedVertex { vertex: u64 },
    #[error("the link of vertex {vertex} is neither a circle nor an arc")]
    PinchedVertex { vertex: u64 },
    #[error("complex has {components} connected components")]
    Disconnected { components: usize },
    #[error("subsurface has no faces")]
    EmptySubsurface,
    #[error("the subsurface covers every face; its complement is empty")]
    EmptyComplement,
    #[error("face index {0} is out of range")]
    FaceOutOfRange(usize),
    #[error("Euler characteristic {euler_char} with {boundary} boundary circles is not a surface")]
    Inconsistent { euler_char: i64, boundary: usize },
}

/// One traversal of an edge by a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub edge: usize,
    pub forward: bool,
}

impl Side {
    pub fn new(edge: usize, forward: bool) -> Side {
        Side { edge, forward }
    }

    pub fn reversed(self) -> Side {
        Side { edge: self.edge, forward: !self.forward }
    }

    /// `+1` for a forward side, `-1` for a backward one.
    pub fn sign(self) -> i64 {
        if self.forward {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Tail,
    Head,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }
}

/// One end of an edge; these are the nodes of vertex links.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEnd {
    pub edge: usize,
    pub end: End,
}

/// The corner of `face` at the vertex where side `index` ends and side
/// `index + 1` begins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub face: usize,
    pub index: usize,
}

/// Link of a vertex as an ordered walk of edge ends joined by face corners.
///
/// `corners[j]` joins `nodes[j]` and `nodes[j + 1]`; for a closed link the
/// last corner joins the last node back to the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLink {
    pub nodes: Vec<EdgeEnd>,
    pub corners: Vec<Corner>,
    pub closed: bool,
}

/// Caller-facing cell lists, keyed by arbitrary integer ids.
///
/// Face sides reference edges by signed id: `+e` walks the edge from its
/// first to its second endpoint, `-e` the other way.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellLists {
    pub vertices: Vec<u64>,
    pub edges: Vec<(u64, u64, u64)>,
    pub faces: Vec<(u64, Vec<i64>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComplex {
    vertex_labels: Vec<u64>,
    edge_labels: Vec<u64>,
    face_labels: Vec<u64>,
    edges: Vec<[usize; 2]>,
    faces: Vec<Vec<Side>>,
    edge_sides: Vec<Vec<Corner>>,
    links: Vec<VertexLink>,
}

/// Topological type of a connected compact surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SurfaceClass {
    pub orientable: bool,
    pub genus_or_crosscaps: u32,
    pub boundary_count: usize,
    pub euler_char: i64,
}

impl SurfaceClass {
    pub fn from_invariants(
        orientable: bool,
        euler_char: i64,
        boundary_count: usize,
    ) -> Result<SurfaceClass, ComplexError> {
        let deficit = 2 - euler_char - boundary_count as i64;
        let bad = ComplexError::Inconsistent { euler_char, boundary: boundary_count };
        let genus_or_crosscaps = if orientable {
            if deficit < 0 || deficit % 2 != 0 {
                return Err(bad);
            }
            deficit / 2
        } else {
            if deficit < 1 {
                return Err(bad);
            }
            deficit
        };
        Ok(SurfaceClass {
            orientable,
            genus_or_crosscaps: genus_or_crosscaps as u32,
            boundary_count,
            euler_char,
        })
    }

    pub fn is_disk(&self) -> bool {
        self.orientable && self.genus_or_crosscaps == 0 && self.boundary_count == 1
    }

    pub fn is_cylinder(&self) -> bool {
        self.orientable && self.genus_or_crosscaps == 0 && self.boundary_count == 2
    }

    pub fn is_mobius_band(&self) -> bool {
        !self.orientable && self.genus_or_crosscaps == 1 && self.boundary_count == 1
    }

    pub fn is_sphere(&self) -> bool {
        self.orientable && self.genus_or_crosscaps == 0 && self.boundary_count == 0
    }

    pub fn is_projective_plane(&self) -> bool {
        !self.orientable && self.genus_or_crosscaps == 1 && self.boundary_count == 0
    }

    pub fn name(&self) -> String {
        match (self.orientable, self.genus_or_crosscaps, self.boundary_count) {
            (true, 0, 0) => "sphere".into(),
            (true, 0, 1) => "disk".into(),
            (true, 0, 2) => "cylinder".into(),
            (true, 0, 3) => "pair of pants".into(),
            (true, 1, 0) => "torus".into(),
            (false, 1, 0) => "projective plane".into(),
            (false, 1, 1) => "Mobius band".into(),
            (false, 2, 0) => "Klein bottle".into(),
            (true, g, b) => format!("orientable genus {g} with {b} boundary circles"),
            (false, c, b) => format!("non-orientable with {c} crosscaps and {b} boundary circles"),
        }
    }
}

impl CellLists {
    /// Builds and validates a connected complex.
    pub fn build(&self) -> Result<SurfaceComplex, ComplexError> {
        let complex = self.build_multi()?;
        let components = complex.component_count();
        if components != 1 {
            return Err(ComplexError::Disconnected { components });
        }
        Ok(complex)
    }

    /// Builds and validates a complex that may have several components.
    pub fn build_multi(&self) -> Result<SurfaceComplex, ComplexError> {
        let mut vertex_index = HashMap::new();
        for (i, &v) in self.vertices.iter().enumerate() {
            if vertex_index.insert(v, i).is_some() {
                return Err(ComplexError::DuplicateId { kind: "vertex", id: v as i64 });
            }
        }
        let mut edge_index = HashMap::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, &(id, a, b)) in self.edges.iter().enumerate() {
            if id == 0 {
                return Err(ComplexError::NonPositiveEdgeId(id));
            }
            if edge_index.insert(id, i).is_some() {
                return Err(ComplexError::DuplicateId { kind: "edge", id: id as i64 });
            }
            let lookup = |v: u64| {
                vertex_index
                    .get(&v)
                    .copied()
                    .ok_or(ComplexError::UnknownId { kind: "vertex", id: v as i64 })
            };
            edges.push([lookup(a)?, lookup(b)?]);
        }
        let mut face_ids = BTreeSet::new();
        let mut faces = Vec::with_capacity(self.faces.len());
        for (id, sides) in &self.faces {
            if *id == 0 {
                return Err(ComplexError::NonPositiveFaceId(0));
            }
            if !face_ids.insert(*id) {
                return Err(ComplexError::DuplicateId { kind: "face", id: *id as i64 });
            }
            let mut walk = Vec::with_capacity(sides.len());
            for &s in sides {
                let e = edge_index
                    .get(&s.unsigned_abs())
                    .copied()
                    .ok_or(ComplexError::UnknownId { kind: "edge", id: s })?;
                walk.push(Side::new(e, s > 0));
            }
            faces.push(walk);
        }
        SurfaceComplex::from_parts(
            self.vertices.clone(),
            self.edges.iter().map(|e| e.0).collect(),
            self.faces.iter().map(|f| f.0).collect(),
            edges,
            faces,
        )
    }
}

impl SurfaceComplex {
    /// Assembles a complex from dense parts and checks every surface invariant.
    pub fn from_parts(
        vertex_labels: Vec<u64>,
        edge_labels: Vec<u64>,
        face_labels: Vec<u64>,
        edges: Vec<[usize; 2]>,
        faces: Vec<Vec<Side>>,
    ) -> Result<SurfaceComplex, ComplexError> {
        let nv = vertex_labels.len();
        debug_assert_eq!(edge_labels.len(), edges.len());
        debug_assert_eq!(face_labels.len(), faces.len());
        for &[a, b] in &edges {
            if a >= nv || b >= nv {
                return Err(ComplexError::UnknownId { kind: "vertex", id: a.max(b) as i64 });
            }
        }
        let mut edge_sides = vec![Vec::new(); edges.len()];
        for (f, walk) in faces.iter().enumerate() {
            if walk.is_empty() {
                return Err(ComplexError::EmptyFace { face: face_labels[f] });
            }
            for (i, side) in walk.iter().enumerate() {
                if side.edge >= edges.len() {
                    return Err(ComplexError::UnknownId { kind: "edge", id: side.edge as i64 });
                }
                let next = walk[(i + 1) % walk.len()];
                if side_end(&edges, *side) != side_start(&edges, next) {
                    return Err(ComplexError::BrokenFaceCycle { face: face_labels[f], position: i });
                }
                edge_sides[side.edge].push(Corner { face: f, index: i });
            }
        }
        for (e, sides) in edge_sides.iter().enumerate() {
            match sides.len() {
                0 => return Err(ComplexError::DanglingEdge { edge: edge_labels[e] }),
                1 | 2 => {}
                n => return Err(ComplexError::NonManifoldEdge { edge: edge_labels[e], sides: n }),
            }
        }
        let links = compute_links(nv, &edges, &faces)
            .map_err(|v| ComplexError::PinchedVertex { vertex: vertex_labels[v] })?;
        for (v, link) in links.iter().enumerate() {
            if link.nodes.is_empty() {
                return Err(ComplexError::IsolatedVertex { vertex: vertex_labels[v] });
            }
        }
        Ok(SurfaceComplex { vertex_labels, edge_labels, face_labels, edges, faces, edge_sides, links })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_label(&self, v: usize) -> u64 {
        self.vertex_labels[v]
    }

    pub fn edge_label(&self, e: usize) -> u64 {
        self.edge_labels[e]
    }

    pub fn face_label(&self, f: usize) -> u64 {
        self.face_labels[f]
    }

    pub fn vertex_labels(&self) -> &[u64] {
        &self.vertex_labels
    }

    pub fn vertex_by_label(&self, label: u64) -> Option<usize> {
        self.vertex_labels.iter().position(|&l| l == label)
    }

    /// `[tail, head]` of an edge.
    pub fn endpoints(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn face(&self, f: usize) -> &[Side] {
        &self.faces[f]
    }

    /// Sides (as face corners `(face, position)`) that use edge `e`.
    pub fn sides_of(&self, e: usize) -> &[Corner] {
        &self.edge_sides[e]
    }

    pub fn link(&self, v: usize) -> &VertexLink {
        &self.links[v]
    }

    pub fn side_start(&self, s: Side) -> usize {
        side_start(&self.edges, s)
    }

    pub fn side_end(&self, s: Side) -> usize {
        side_end(&self.edges, s)
    }

    pub fn end_vertex(&self, end: EdgeEnd) -> usize {
        match end.end {
            End::Tail => self.edges[end.edge][0],
            End::Head => self.edges[end.edge][1],
        }
    }

    /// Vertex at the far end of an edge end.
    pub fn opposite_vertex(&self, end: EdgeEnd) -> usize {
        self.end_vertex(EdgeEnd { edge: end.edge, end: end.end.opposite() })
    }

    /// Vertex of a corner.
    pub fn corner_vertex(&self, c: Corner) -> usize {
        self.side_end(self.faces[c.face][c.index])
    }

    /// Vertices of a face in cycle order; entry `i` is where side `i` starts.
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&s| self.side_start(s)).collect()
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_sides[e].len() == 1
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        !self.links[v].closed
    }

    pub fn is_closed(&self) -> bool {
        (0..self.edge_count()).all(|e| !self.is_boundary_edge(e))
    }

    /// The other face side across the edge used by side `index` of `face`.
    pub fn across(&self, face: usize, index: usize) -> Option<Corner> {
        let e = self.faces[face][index].edge;
        let sides = &self.edge_sides[e];
        if sides.len() < 2 {
            return None;
        }
        let me = Corner { face, index };
        Some(if sides[0] == me { sides[1] } else { sides[0] })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Face indices grouped by connectivity through shared edges.
    pub fn face_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::<usize>::new(self.face_count());
        for sides in &self.edge_sides {
            if let [a, b] = sides[..] {
                uf.union(a.face, b.face);
            }
        }
        group_by_root(self.face_count(), |f| uf.find(f))
    }

    pub fn component_count(&self) -> usize {
        self.face_components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Connected components as subsurfaces of `self`.
    pub fn connected_components(&self) -> Vec<Subsurface> {
        self.face_components()
            .into_iter()
            .map(|faces| Subsurface::new(self, faces).expect("a component of a surface is a surface"))
            .collect()
    }

    /// Consistent face orientation flags (`true` means reversed), if any exist.
    pub fn orientation(&self) -> Option<Vec<bool>> {
        let mut flip: Vec<Option<bool>> = vec![None; self.face_count()];
        for start in 0..self.face_count() {
            if flip[start].is_some() {
                continue;
            }
            flip[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(f) = queue.pop_front() {
                let ff = flip[f].unwrap();
                for (i, side) in self.faces[f].iter().enumerate() {
                    let Some(other) = self.across(f, i) else { continue };
                    let other_side = self.faces[other.face][other.index];
                    // Neighbouring faces must traverse the shared edge in opposite directions.
                    let want = (side.forward ^ ff) == other_side.forward;
                    match flip[other.face] {
                        None => {
                            flip[other.face] = Some(want);
                            queue.push_back(other.face);
                        }
                        Some(got) if got != want => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(flip.into_iter().map(|f| f.unwrap()).collect())
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation().is_some()
    }

    /// Boundary circles as cyclic side walks.
    pub fn boundary_circles(&self) -> Vec<Vec<Side>> {
        let mut seen = vec![false; self.edge_count()];
        let mut circles = Vec::new();
        for e0 in 0..self.edge_count() {
            if seen[e0] || !self.is_boundary_edge(e0) {
                continue;
            }
            let mut circle = Vec::new();
            let mut side = Side::new(e0, true);
            loop {
                seen[side.edge] = true;
                circle.push(side);
                let arrive = EdgeEnd { edge: side.edge, end: if side.forward { End::Head } else { End::Tail } };
                let link = &self.links[self.side_end(side)];
                let first = link.nodes[0];
                let last = *link.nodes.last().unwrap();
                let leave = if first == arrive { last } else { first };
                side = Side::new(leave.edge, leave.end == End::Tail);
                if side.edge == e0 {
                    break;
                }
            }
            circles.push(circle);
        }
        circles
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_circles().len()
    }

    /// Orientability, genus or crosscap number and boundary count.
    pub fn classify(&self) -> Result<SurfaceClass, ComplexError> {
        let components = self.component_count();
        if components != 1 {
            return Err(ComplexError::Disconnected { components });
        }
        SurfaceClass::from_invariants(self.is_orientable(), self.euler_characteristic(), self.boundary_count())
    }

    /// Barycentric-style subdivision: each edge is split at a midpoint and
    /// each face is coned from a new centre vertex into triangles.
    pub fn barycentric_subdivision(&self) -> SurfaceComplex {
        let nv = self.vertex_count();
        let ne = self.edge_count();
        let mid = |e: usize| nv + e;
        let centre = |f: usize| nv + ne + f;
        let total_vertices = nv + ne + self.face_count();
        let mut edges = Vec::new();
        // half edges: 2e (tail..mid), 2e+1 (mid..head)
        for e in 0..ne {
            let [a, b] = self.edges[e];
            edges.push([a, mid(e)]);
            edges.push([mid(e), b]);
        }
        let mut faces = Vec::new();
        for (f, walk) in self.faces.iter().enumerate() {
            let spokes_to_corner = edges.len();
            // spoke from the centre to the start vertex of each side
            for &s in walk.iter() {
                edges.push([centre(f), self.side_start(s)]);
            }
            let spokes_to_mid = edges.len();
            for &s in walk.iter() {
                edges.push([centre(f), mid(s.edge)]);
            }
            let n = walk.len();
            for (i, &s) in walk.iter().enumerate() {
                let (first_half, second_half) = if s.forward {
                    (Side::new(2 * s.edge, true), Side::new(2 * s.edge + 1, true))
                } else {
                    (Side::new(2 * s.edge + 1, false), Side::new(2 * s.edge, false))
                };
                let to_start = spokes_to_corner + i;
                let to_next = spokes_to_corner + (i + 1) % n;
                let to_mid = spokes_to_mid + i;
                faces.push(vec![Side::new(to_start, true), first_half, Side::new(to_mid, false)]);
                faces.push(vec![Side::new(to_mid, true), second_half, Side::new(to_next, false)]);
            }
        }
        let vertex_labels = (0..total_vertices as u64).collect();
        let edge_labels = (1..=edges.len() as u64).collect();
        let face_labels = (1..=faces.len() as u64).collect();
        SurfaceComplex::from_parts(vertex_labels, edge_labels, face_labels, edges, faces)
            .expect("subdivision of a valid complex is valid")
    }

    /// Caller-facing cell lists reproducing this complex.
    pub fn to_cell_lists(&self) -> CellLists {
        CellLists {
            vertices: self.vertex_labels.clone(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(e, &[a, b])| (self.edge_labels[e], self.vertex_labels[a], self.vertex_labels[b]))
                .collect(),
            faces: self
                .faces
                .iter()
                .enumerate()
                .map(|(f, walk)| {
                    let sides = walk
                        .iter()
                        .map(|s| {
                            let l = self.edge_labels[s.edge] as i64;
                            if s.forward {
                                l
                            } else {
                                -l
                            }
                        })
                        .collect();
                    (self.face_labels[f], sides)
                })
                .collect(),
        }
    }
}

fn side_start(edges: &[[usize; 2]], s: Side) -> usize {
    if s.forward {
        edges[s.edge][0]
    } else {
        edges[s.edge][1]
    }
}

fn side_end(edges: &[[usize; 2]], s: Side) -> usize {
    if s.forward {
        edges[s.edge][1]
    } else {
        edges[s.edge][0]
    }
}

fn arriving_end(s: Side) -> EdgeEnd {
    EdgeEnd { edge: s.edge, end: if s.forward { End::Head } else { End::Tail } }
}

fn leaving_end(s: Side) -> EdgeEnd {
    EdgeEnd { edge: s.edge, end: if s.forward { End::Tail } else { End::Head } }
}

/// Walks every vertex link. Returns the offending vertex if some link is not
/// a single circle or a single arc.
fn compute_links(nv: usize, edges: &[[usize; 2]], faces: &[Vec<Side>]) -> Result<Vec<VertexLink>, usize> {
    let mut ends: Vec<Vec<EdgeEnd>> = vec![Vec::new(); nv];
    for (e, &[a, b]) in edges.iter().enumerate() {
        ends[a].push(EdgeEnd { edge: e, end: End::Tail });
        ends[b].push(EdgeEnd { edge: e, end: End::Head });
    }
    let mut corners: Vec<Vec<(Corner, EdgeEnd, EdgeEnd)>> = vec![Vec::new(); nv];
    for (f, walk) in faces.iter().enumerate() {
        for (i, &s) in walk.iter().enumerate() {
            let next = walk[(i + 1) % walk.len()];
            let v = side_end(edges, s);
            corners[v].push((Corner { face: f, index: i }, arriving_end(s), leaving_end(next)));
        }
    }
    let mut links = Vec::with_capacity(nv);
    for v in 0..nv {
        links.push(walk_link(&ends[v], &corners[v]).ok_or(v)?);
    }
    Ok(links)
}

fn walk_link(nodes: &[EdgeEnd], corners: &[(Corner, EdgeEnd, EdgeEnd)]) -> Option<VertexLink> {
    if nodes.is_empty() {
        return Some(VertexLink { nodes: Vec::new(), corners: Vec::new(), closed: true });
    }
    let index: HashMap<EdgeEnd, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (c, (_, a, b)) in corners.iter().enumerate() {
        incident[index[a]].push(c);
        incident[index[b]].push(c);
    }
    let ones: Vec<usize> = (0..nodes.len()).filter(|&n| incident[n].len() == 1).collect();
    let closed = match ones.len() {
        0 => true,
        2 => false,
        _ => return None,
    };
    if incident.iter().any(|i| i.is_empty() || i.len() > 2) {
        return None;
    }
    let start = if closed { 0 } else { ones[0] };
    let mut used = vec![false; corners.len()];
    let mut order_nodes = vec![nodes[start]];
    let mut order_corners = Vec::new();
    let mut current = start;
    loop {
        let Some(&c) = incident[current].iter().find(|&&c| !used[c]) else { break };
        used[c] = true;
        let (corner, a, b) = corners[c];
        let next = if index[&a] == current { index[&b] } else { index[&a] };
        order_corners.push(corner);
        current = next;
        order_nodes.push(nodes[next]);
    }
    if closed {
        // the walk returns to its start
        if current != start {
            return None;
        }
        order_nodes.pop();
    }
    if used.iter().any(|u| !u) || order_nodes.len() != nodes.len() {
        return None;
    }
    Some(VertexLink { nodes: order_nodes, corners: order_corners, closed })
}

fn group_by_root(n: usize, mut root: impl FnMut(usize) -> usize) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = HashMap::new();
    for i in 0..n {
        let r = root(i);
        let k = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[k].push(i);
    }
    groups
}

/// A union of faces of a parent complex that is itself a surface.
///
/// The induced complex carries the parent's labels; `vertex_map`,
/// `edge_map` and `face_map` send induced indices back to the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsurface {
    faces: Vec<usize>,
    complex: SurfaceComplex,
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
}

impl Subsurface {
    /// Induced subsurface on a face subset. Pinched subsets are rejected.
    pub fn new(parent: &SurfaceComplex, faces: impl IntoIterator<Item = usize>) -> Result<Subsurface, ComplexError> {
        let faces: Vec<usize> = faces.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if faces.is_empty() {
            return Err(ComplexError::EmptySubsurface);
        }
        if let Some(&f) = faces.iter().find(|&&f| f >= parent.face_count()) {
            return Err(ComplexError::FaceOutOfRange(f));
        }
        let mut vertex_new = HashMap::new();
        let mut edge_new = HashMap::new();
        let mut vertex_map = Vec::new();
        let mut edge_map = Vec::new();
        let mut edges = Vec::new();
        let mut walks = Vec::with_capacity(faces.len());
        for &f in &faces {
            let mut walk = Vec::with_capacity(parent.faces[f].len());
            for &s in &parent.faces[f] {
                let e = *edge_new.entry(s.edge).or_insert_with(|| {
                    let [a, b] = parent.edges[s.edge];
                    let mut map_v = |v: usize| {
                        *vertex_new.entry(v).or_insert_with(|| {
                            vertex_map.push(v);
                            vertex_map.len() - 1
                        })
                    };
                    edges.push([map_v(a), map_v(b)]);
                    edge_map.push(s.edge);
                    edge_map.len() - 1
                });
                walk.push(Side::new(e, s.forward));
            }
            walks.push(walk);
        }
        let complex = SurfaceComplex::from_parts(
            vertex_map.iter().map(|&v| parent.vertex_labels[v]).collect(),
            edge_map.iter().map(|&e| parent.edge_labels[e]).collect(),
            faces.iter().map(|&f| parent.face_labels[f]).collect(),
            edges,
            walks,
        )?;
        Ok(Subsurface { faces, complex, vertex_map, edge_map })
    }

    /// Sorted parent face indices.
    pub fn faces(&self) -> &[usize] {
        &self.faces
    }

    pub fn contains_face(&self, f: usize) -> bool {
        self.faces.binary_search(&f).is_ok()
    }

    pub fn complex(&self) -> &SurfaceComplex {
        &self.complex
    }

    /// Parent indices of the induced vertices.
    pub fn parent_vertices(&self) -> &[usize] {
        &self.vertex_map
    }

    /// Parent indices of the induced edges.
    pub fn parent_edges(&self) -> &[usize] {
        &self.edge_map
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertex_map.contains(&v)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.complex.euler_characteristic()
    }

    pub fn classify(&self) -> Result<SurfaceClass, ComplexError> {
        self.complex.classify()
    }

    /// Boundary circles expressed with parent edge indices.
    pub fn induced_boundary(&self) -> Vec<Vec<Side>> {
        self.complex
            .boundary_circles()
            .into_iter()
            .map(|c| c.into_iter().map(|s| Side::new(self.edge_map[s.edge], s.forward)).collect())
            .collect()
    }

    /// Parent edge indices on the boundary of this subsurface.
    pub fn boundary_edges(&self) -> BTreeSet<usize> {
        (0..self.complex.edge_count())
            .filter(|&e| self.complex.is_boundary_edge(e))
            .map(|e| self.edge_map[e])
            .collect()
    }

    /// Connected components as subsurfaces of the same parent.
    pub fn components(&self, parent: &SurfaceComplex) -> Vec<Subsurface> {
        self.complex
            .face_components()
            .into_iter()
            .map(|group| {
                Subsurface::new(parent, group.into_iter().map(|f| self.faces[f]))
                    .expect("component of a subsurface is a subsurface")
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.complex.is_connected()
    }

    /// Union with other face sets of the same parent.
    pub fn union<'a>(
        &self,
        parent: &SurfaceComplex,
        others: impl IntoIterator<Item = &'a Subsurface>,
    ) -> Result<Subsurface, ComplexError> {
        let mut faces: BTreeSet<usize> = self.faces.iter().copied().collect();
        for o in others {
            faces.extend(o.faces.iter().copied());
        }
        Subsurface::new(parent, faces)
    }

    pub fn is_subset_of(&self, other: &Subsurface) -> bool {
        self.faces.iter().all(|&f| other.contains_face(f))
    }

    pub fn is_disjoint_from(&self, other: &Subsurface) -> bool {
        self.faces.iter().all(|&f| !other.contains_face(f))
    }
}

/// Connected components of the closure of `M \ N`, as subsurfaces of `M`.
///
/// Components are grouped by adjacency through edges with both sides outside
/// `N`; each one is validated as a surface. Boundary circles shared with `N`
/// appear in both.
pub fn complement_closure(surface: &SurfaceComplex, n: &Subsurface) -> Result<Vec<Subsurface>, ComplexError> {
    complement_of_faces(surface, n.faces())
}

/// Like [`complement_closure`] for a raw face set.
pub fn complement_of_faces(surface: &SurfaceComplex, faces: &[usize]) -> Result<Vec<Subsurface>, ComplexError> {
    let inside: BTreeSet<usize> = faces.iter().copied().collect();
    let outside: Vec<usize> = (0..surface.face_count()).filter(|f| !inside.contains(f)).collect();
    if outside.is_empty() {
        return Err(ComplexError::EmptyComplement);
    }
    let mut uf = UnionFind::<usize>::new(surface.face_count());
    for e in 0..surface.edge_count() {
        if let [a, b] = surface.sides_of(e)[..] {
            if !inside.contains(&a.face) && !inside.contains(&b.face) {
                uf.union(a.face, b.face);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = HashMap::new();
    for &f in &outside {
        let k = *slot.entry(uf.find(f)).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[k].push(f);
    }
    groups.into_iter().map(|g| Subsurface::new(surface, g)).collect()
}

/// Euler characteristic of the intersection of two subsurfaces (a 1-complex
/// of shared vertices and edges).
pub fn intersection_euler(a: &Subsurface, b: &Subsurface) -> i64 {
    let va: BTreeSet<usize> = a.parent_vertices().iter().copied().collect();
    let ea: BTreeSet<usize> = a.parent_edges().iter().copied().collect();
    let shared_v = b.parent_vertices().iter().filter(|v| va.contains(v)).count() as i64;
    let shared_e = b.parent_edges().iter().filter(|e| ea.contains(e)).count() as i64;
    shared_v - shared_e
}
