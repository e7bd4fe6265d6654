//! Critical components of the level-set foliation.
//!
//! The surface is refined at every special value and at the edges of the
//! bands around them, so that each critical level set is a subcomplex. A
//! critical component is a connected piece of such a level set containing a
//! critical vertex; its leaves are the critical vertices themselves and the
//! open arcs left after removing them.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;

use crate::atlas::{choose_bands, Band};
use crate::complex::SurfaceComplex;
use crate::function::{validate_axioms, AxiomReport, CriticalVertex, FunctionError, PlFunction, Rational};
use crate::refine::{refine, Refinement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leaf {
    Point(usize),
    /// An open arc: its edges, its interior vertices and its two endpoints
    /// (critical vertices, possibly equal).
    Arc { edges: Vec<usize>, interior: Vec<usize>, ends: [usize; 2] },
    /// A closed circle containing no critical vertex.
    Circle { edges: Vec<usize>, vertices: Vec<usize> },
}

/// A connected piece of a critical level set, in refined indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalComponent {
    /// Index into [`Foliation::levels`].
    pub level_index: usize,
    pub level: Rational,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// Critical vertices; their indices agree in the original and refined
    /// complexes.
    pub critical: Vec<CriticalVertex>,
    pub leaves: Vec<Leaf>,
}

impl CriticalComponent {
    pub fn is_point(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn arc_count(&self) -> usize {
        self.leaves.iter().filter(|l| matches!(l, Leaf::Arc { .. })).count()
    }
}

/// A validated instance together with its bands, refinement and critical
/// components.
#[derive(Clone, Debug)]
pub struct Foliation {
    pub surface: SurfaceComplex,
    pub function: PlFunction,
    pub axioms: AxiomReport,
    /// One band per entry of `axioms.levels`.
    pub bands: Vec<Band>,
    pub refined: Refinement,
    pub components: Vec<CriticalComponent>,
}

impl Foliation {
    pub fn new(surface: &SurfaceComplex, function: &PlFunction) -> Result<Foliation, FunctionError> {
        let axioms = validate_axioms(surface, function)?;
        let centers: Vec<Rational> = axioms.levels.iter().map(|l| l.value.clone()).collect();
        let bands = choose_bands(&centers, function.target());
        let mut cut_levels = centers.clone();
        for b in &bands {
            cut_levels.push(b.lo.clone());
            cut_levels.push(b.hi.clone());
        }
        let refined = refine(surface, function, &cut_levels);
        let mut components = Vec::new();
        for (level_index, level) in axioms.levels.iter().enumerate() {
            if level.critical.is_empty() {
                continue;
            }
            components.extend(components_at(&refined, level_index, &level.value, &level.critical));
        }
        Ok(Foliation {
            surface: surface.clone(),
            function: function.clone(),
            axioms,
            bands,
            refined,
            components,
        })
    }

    pub fn levels(&self) -> &[crate::function::Level] {
        &self.axioms.levels
    }

    pub fn critical(&self) -> &[CriticalVertex] {
        &self.axioms.critical
    }

    /// Component containing a given critical vertex.
    pub fn component_of(&self, vertex: usize) -> Option<usize> {
        self.components.iter().position(|k| k.critical.iter().any(|c| c.vertex == vertex))
    }
}

fn components_at(
    refined: &Refinement,
    level_index: usize,
    level: &Rational,
    critical: &[CriticalVertex],
) -> Vec<CriticalComponent> {
    let s = &refined.complex;
    let mut out = Vec::new();
    for (vertices, edges) in refined.level_components(level) {
        let here: Vec<CriticalVertex> =
            critical.iter().copied().filter(|c| vertices.binary_search(&c.vertex).is_ok()).collect();
        if here.is_empty() {
            continue;
        }
        let leaves = leaves_of(s, &vertices, &edges, &here);
        out.push(CriticalComponent { level_index, level: level.clone(), vertices, edges, critical: here, leaves });
    }
    out
}

fn leaves_of(s: &SurfaceComplex, vertices: &[usize], edges: &[usize], critical: &[CriticalVertex]) -> Vec<Leaf> {
    let is_critical = |v: usize| critical.iter().any(|c| c.vertex == v);
    let mut leaves: Vec<Leaf> = critical.iter().map(|c| Leaf::Point(c.vertex)).collect();
    // union edges through non-critical vertices; each class is one open arc
    let mut uf = UnionFind::<usize>::new(s.edge_count());
    let mut at_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in edges {
        for v in s.endpoints(e) {
            if !is_critical(v) {
                at_vertex.entry(v).or_default().push(e);
            }
        }
    }
    for incident in at_vertex.values() {
        for w in incident.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut arcs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in edges {
        arcs.entry(uf.find(e)).or_default().push(e);
    }
    for arc_edges in arcs.into_values() {
        let mut interior: Vec<usize> = Vec::new();
        let mut ends: Vec<usize> = Vec::new();
        for &e in &arc_edges {
            for v in s.endpoints(e) {
                if is_critical(v) {
                    ends.push(v);
                } else if !interior.contains(&v) {
                    interior.push(v);
                }
            }
        }
        interior.sort_unstable();
        if ends.is_empty() {
            leaves.push(Leaf::Circle { edges: arc_edges, vertices: interior });
        } else {
            debug_assert_eq!(ends.len(), 2);
            leaves.push(Leaf::Arc { edges: arc_edges, interior, ends: [ends[0], ends[ends.len() - 1]] });
        }
    }
    debug_assert!(vertices.iter().all(|&v| is_critical(v) || leaves.iter().any(|l| match l {
        Leaf::Arc { interior, .. } => interior.contains(&v),
        Leaf::Circle { vertices, .. } => vertices.contains(&v),
        Leaf::Point(_) => false,
    })));
    leaves
}

/// Critical components of the level-set foliation of `f`.
pub fn critical_components(s: &SurfaceComplex, f: &PlFunction) -> Result<Vec<CriticalComponent>, FunctionError> {
    Ok(Foliation::new(s, f)?.components)
}
