//! Piecewise-linear functions on polygonal surfaces.
//!
//! Values live on vertices as exact rationals. On each face the function is
//! the monotone extension of its boundary values: every face boundary has a
//! single rise and a single fall, so every regular level crosses a face in at
//! most one chord and critical points can only sit at vertices.
//!
//! Circle-valued functions store representatives in `[0, 1)`. Along an edge
//! the function follows the shorter arc, so an edge whose endpoint values are
//! exactly half a turn apart is rejected.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::SurfaceComplex;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctionError {
    #[error("function has {got} values for {expected} vertices")]
    ValueCount { expected: usize, got: usize },
    #[error("boundary circle through vertex {vertex} is not a level set")]
    BoundaryNotLevel { vertex: u64 },
    #[error("the level through boundary vertex {vertex} enters the interior")]
    CriticalOnBoundary { vertex: u64 },
    #[error("interior edge {edge} joins two vertices with equal values")]
    DegenerateTie { edge: u64 },
    #[error("face {face} rises and falls more than once along its boundary")]
    NonMonotoneFace { face: u64 },
    #[error("face {face} is constant")]
    FlatFace { face: u64 },
    #[error("circle values wind around face {face}")]
    WindingFace { face: u64 },
    #[error("edge {edge} spans exactly half a turn")]
    AmbiguousCircleEdge { edge: u64 },
    #[error("vertex {vertex} lies on the boundary")]
    BoundaryVertex { vertex: u64 },
    #[error("level {level} is critical")]
    CriticalLevel { level: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Line,
    Circle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlFunction {
    values: Vec<Rational>,
    target: Target,
}

/// Morse-theoretic type of an interior vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    Regular,
    Min,
    Max,
    /// Lower link with `m + 1` components; `m = 1` is a non-degenerate saddle.
    Saddle(u32),
}

impl VertexKind {
    pub fn is_critical(self) -> bool {
        self != VertexKind::Regular
    }

    pub fn is_extremum(self) -> bool {
        matches!(self, VertexKind::Min | VertexKind::Max)
    }

    /// Contribution to the Euler characteristic.
    pub fn index_weight(self) -> i64 {
        match self {
            VertexKind::Regular => 0,
            VertexKind::Min | VertexKind::Max => 1,
            VertexKind::Saddle(m) => -(m as i64),
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKind::Regular => write!(f, "regular"),
            VertexKind::Min => write!(f, "min"),
            VertexKind::Max => write!(f, "max"),
            VertexKind::Saddle(m) => write!(f, "saddle({m})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CriticalVertex {
    pub vertex: usize,
    pub kind: VertexKind,
}

/// One special value with the critical vertices and boundary circles on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub value: Rational,
    pub critical: Vec<CriticalVertex>,
    /// Indices into [`SurfaceComplex::boundary_circles`].
    pub boundary_circles: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub boundary_values: Vec<Rational>,
    pub critical: Vec<CriticalVertex>,
    pub levels: Vec<Level>,
}

pub fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

/// Reduces a rational into `[0, 1)`.
pub fn modulo_one(x: &Rational) -> Rational {
    x - x.floor()
}

impl PlFunction {
    pub fn new(values: Vec<Rational>, target: Target) -> PlFunction {
        let values = match target {
            Target::Line => values,
            Target::Circle => values.iter().map(modulo_one).collect(),
        };
        PlFunction { values, target }
    }

    pub fn line(values: Vec<Rational>) -> PlFunction {
        PlFunction::new(values, Target::Line)
    }

    pub fn from_integers(values: &[i64]) -> PlFunction {
        PlFunction::line(values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn is_circle_valued(&self) -> bool {
        self.target == Target::Circle
    }

    pub fn value(&self, v: usize) -> &Rational {
        &self.values[v]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Reduces a level to its canonical representative.
    pub fn normalize(&self, level: &Rational) -> Rational {
        match self.target {
            Target::Line => level.clone(),
            Target::Circle => modulo_one(level),
        }
    }

    /// Difference `value(to) - value(from)` following the function along an
    /// edge. `None` for a circle-valued edge spanning exactly half a turn.
    pub fn difference(&self, from: &Rational, to: &Rational) -> Option<Rational> {
        let d = to - from;
        match self.target {
            Target::Line => Some(d),
            Target::Circle => {
                let mut d = modulo_one(&d);
                let h = half();
                match d.cmp(&h) {
                    Ordering::Equal => return None,
                    Ordering::Greater => d -= Rational::one(),
                    Ordering::Less => {}
                }
                Some(d)
            }
        }
    }

    /// Change of the function along edge `e`, from tail to head.
    pub fn edge_delta(&self, s: &SurfaceComplex, e: usize) -> Rational {
        let [a, b] = s.endpoints(e);
        self.difference(&self.values[a], &self.values[b])
            .expect("validated functions have no half-turn edges")
    }

    /// Change from `v` to the far end of one of its edge ends.
    pub fn delta_towards(&self, s: &SurfaceComplex, end: crate::complex::EdgeEnd) -> Rational {
        let d = self.edge_delta(s, end.edge);
        match end.end {
            crate::complex::End::Tail => d,
            crate::complex::End::Head => -d,
        }
    }

    /// Lifted values along the boundary of face `f`, starting from the
    /// representative at its first vertex. The entry count equals the face
    /// length; the walk closes up for validated functions.
    pub fn face_lifts(&self, s: &SurfaceComplex, f: usize) -> Vec<Rational> {
        let walk = s.face(f);
        let mut lifts = Vec::with_capacity(walk.len());
        let mut current = self.values[s.side_start(walk[0])].clone();
        for &side in walk {
            lifts.push(current.clone());
            let d = self.edge_delta(s, side.edge);
            current = if side.forward { current + d } else { current - d };
        }
        lifts
    }

    /// Lifts of `level` lying in the closed interval `[lo, hi]`.
    pub fn lifts_between(&self, level: &Rational, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        match self.target {
            Target::Line => {
                if lo <= level && level <= hi {
                    vec![level.clone()]
                } else {
                    Vec::new()
                }
            }
            Target::Circle => {
                let base = modulo_one(level);
                let mut k = (lo - &base).ceil();
                let mut out = Vec::new();
                loop {
                    let candidate = &base + &k;
                    if &candidate > hi {
                        break;
                    }
                    out.push(candidate);
                    k += Rational::one();
                }
                out
            }
        }
    }

    /// Restriction to a subset of vertices given by an index map.
    pub fn restrict(&self, vertices: &[usize]) -> PlFunction {
        PlFunction { values: vertices.iter().map(|&v| self.values[v].clone()).collect(), target: self.target }
    }
}

/// Checks boundary constancy, interior genericity, face monotonicity and that
/// no critical point touches the boundary.
pub fn validate_axioms(s: &SurfaceComplex, f: &PlFunction) -> Result<AxiomReport, FunctionError> {
    if f.len() != s.vertex_count() {
        return Err(FunctionError::ValueCount { expected: s.vertex_count(), got: f.len() });
    }
    for e in 0..s.edge_count() {
        let [a, b] = s.endpoints(e);
        let Some(d) = f.difference(f.value(a), f.value(b)) else {
            return Err(FunctionError::AmbiguousCircleEdge { edge: s.edge_label(e) });
        };
        if d.is_zero() && !s.is_boundary_edge(e) {
            return Err(FunctionError::DegenerateTie { edge: s.edge_label(e) });
        }
    }
    for face in 0..s.face_count() {
        check_face(s, f, face)?;
    }
    let circles = s.boundary_circles();
    let mut boundary_values = Vec::with_capacity(circles.len());
    for circle in &circles {
        let first = s.side_start(circle[0]);
        for &side in circle {
            let v = s.side_start(side);
            if f.value(v) != f.value(first) {
                return Err(FunctionError::BoundaryNotLevel { vertex: s.vertex_label(v) });
            }
        }
        check_boundary_side(s, f, circle)?;
        boundary_values.push(f.value(first).clone());
    }
    let critical = critical_vertices(s, f)?;
    let levels = group_levels(f, &critical, &boundary_values);
    Ok(AxiomReport { boundary_values, critical, levels })
}

fn check_face(s: &SurfaceComplex, f: &PlFunction, face: usize) -> Result<(), FunctionError> {
    let walk = s.face(face);
    let label = s.face_label(face);
    let mut total = Rational::zero();
    let mut signs = Vec::with_capacity(walk.len());
    for &side in walk {
        let d = f.edge_delta(s, side.edge);
        let d = if side.forward { d } else { -d };
        if !d.is_zero() {
            signs.push(d.is_positive());
        }
        total += d;
    }
    if !total.is_zero() {
        return Err(FunctionError::WindingFace { face: label });
    }
    if signs.is_empty() {
        return Err(FunctionError::FlatFace { face: label });
    }
    let changes = (0..signs.len()).filter(|&i| signs[i] != signs[(i + 1) % signs.len()]).count();
    if changes != 2 {
        return Err(FunctionError::NonMonotoneFace { face: label });
    }
    Ok(())
}

/// All interior neighbours of a boundary circle, and every face along it,
/// must lie strictly on one side of the circle's level.
fn check_boundary_side(
    s: &SurfaceComplex,
    f: &PlFunction,
    circle: &[crate::complex::Side],
) -> Result<(), FunctionError> {
    let mut side: Option<bool> = None;
    let mut agree = |positive: bool, v: usize| -> Result<(), FunctionError> {
        match side {
            None => {
                side = Some(positive);
                Ok(())
            }
            Some(p) if p == positive => Ok(()),
            Some(_) => Err(FunctionError::CriticalOnBoundary { vertex: s.vertex_label(v) }),
        }
    };
    for &bs in circle {
        let v = s.side_start(bs);
        for &node in &s.link(v).nodes {
            if s.is_boundary_edge(node.edge) {
                continue;
            }
            let d = f.delta_towards(s, node);
            agree(d.is_positive(), v)?;
        }
        let corner = s.sides_of(bs.edge)[0];
        let lifts = f.face_lifts(s, corner.face);
        let base = &lifts[corner.index];
        for l in &lifts {
            if l != base {
                agree(l > base, v)?;
            }
        }
    }
    Ok(())
}

/// Classifies an interior vertex by the runs of lower neighbours around its
/// link.
pub fn classify_vertex(s: &SurfaceComplex, f: &PlFunction, v: usize) -> Result<VertexKind, FunctionError> {
    if s.is_boundary_vertex(v) {
        return Err(FunctionError::BoundaryVertex { vertex: s.vertex_label(v) });
    }
    let link = s.link(v);
    let mut lower = Vec::with_capacity(link.nodes.len());
    for &node in &link.nodes {
        let d = f.delta_towards(s, node);
        if d.is_zero() {
            return Err(FunctionError::DegenerateTie { edge: s.edge_label(node.edge) });
        }
        lower.push(d.is_negative());
    }
    let n = lower.len();
    let below = lower.iter().filter(|&&l| l).count();
    if below == 0 {
        return Ok(VertexKind::Min);
    }
    if below == n {
        return Ok(VertexKind::Max);
    }
    let runs = (0..n).filter(|&i| lower[i] && !lower[(i + n - 1) % n]).count();
    Ok(if runs == 1 { VertexKind::Regular } else { VertexKind::Saddle(runs as u32 - 1) })
}

/// Every critical interior vertex, in index order.
pub fn critical_vertices(s: &SurfaceComplex, f: &PlFunction) -> Result<Vec<CriticalVertex>, FunctionError> {
    let mut out = Vec::new();
    for v in 0..s.vertex_count() {
        if s.is_boundary_vertex(v) {
            continue;
        }
        let kind = classify_vertex(s, f, v)?;
        if kind.is_critical() {
            out.push(CriticalVertex { vertex: v, kind });
        }
    }
    Ok(out)
}

/// Critical values together with boundary values, sorted and deduplicated.
pub fn critical_levels(s: &SurfaceComplex, f: &PlFunction) -> Result<Vec<Level>, FunctionError> {
    Ok(validate_axioms(s, f)?.levels)
}

fn group_levels(f: &PlFunction, critical: &[CriticalVertex], boundary_values: &[Rational]) -> Vec<Level> {
    fn entry(map: &mut BTreeMap<Rational, Level>, key: Rational) -> &mut Level {
        map.entry(key.clone()).or_insert_with(|| Level { value: key, critical: Vec::new(), boundary_circles: Vec::new() })
    }
    let mut map: BTreeMap<Rational, Level> = BTreeMap::new();
    for c in critical {
        entry(&mut map, f.normalize(f.value(c.vertex))).critical.push(*c);
    }
    for (i, v) in boundary_values.iter().enumerate() {
        entry(&mut map, f.normalize(v)).boundary_circles.push(i);
    }
    map.into_values().collect()
}

/// Sum over critical vertices of their index weight; equals the Euler
/// characteristic of the surface.
pub fn morse_sum(critical: &[CriticalVertex]) -> i64 {
    critical.iter().map(|c| c.kind.index_weight()).sum()
}

pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CellLists;
    use crate::fixtures;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// Cone over a `degree`-gon: vertex 0 is the apex, 1..=degree the rim.
    fn cone(degree: usize, rim_values: &[i64]) -> (SurfaceComplex, PlFunction) {
        let polys: Vec<Vec<usize>> = (0..degree).map(|k| vec![0, 1 + k, 1 + (k + 1) % degree]).collect();
        let s = fixtures::polygon_complex(degree + 1, &polys).unwrap();
        let mut values = vec![0];
        values.extend_from_slice(rim_values);
        (s, PlFunction::from_integers(&values))
    }

    #[test]
    fn octahedron_height_is_valid() {
        let s = fixtures::octahedron();
        let f = PlFunction::from_integers(&[10, 1, 2, 3, 4, -10]);
        let report = validate_axioms(&s, &f).unwrap();
        let kinds: Vec<VertexKind> = report.critical.iter().map(|c| c.kind).collect();
        assert_eq!(kinds, vec![VertexKind::Max, VertexKind::Min]);
        assert_eq!(morse_sum(&report.critical), 2);
        assert_eq!(report.levels.len(), 2);
    }

    #[test]
    fn equal_adjacent_interior_values_tie() {
        let s = fixtures::octahedron();
        let f = PlFunction::from_integers(&[10, 1, 1, 3, 4, -10]);
        assert!(matches!(validate_axioms(&s, &f), Err(FunctionError::DegenerateTie { .. })));
    }

    #[test]
    fn cylinder_with_uneven_boundary_is_rejected() {
        // two squares glued into an annulus; bottom circle 0-1, top circle 2-3
        let lists = CellLists {
            vertices: vec![0, 1, 2, 3],
            edges: vec![(1, 0, 1), (2, 1, 0), (3, 2, 3), (4, 3, 2), (5, 0, 2), (6, 1, 3)],
            faces: vec![(1, vec![1, 6, -3, -5]), (2, vec![2, 5, -4, -6])],
        };
        let s = lists.build().unwrap();
        assert_eq!(s.boundary_count(), 2);
        let ok = PlFunction::from_integers(&[0, 0, 1, 1]);
        assert!(validate_axioms(&s, &ok).is_ok());
        let uneven = PlFunction::from_integers(&[0, 5, 1, 1]);
        assert!(matches!(validate_axioms(&s, &uneven), Err(FunctionError::BoundaryNotLevel { .. })));
    }

    #[test]
    fn cone_classification() {
        let (s, f) = cone(5, &[1, 2, 3, 4, 5]);
        assert_eq!(classify_vertex(&s, &f, 0).unwrap(), VertexKind::Min);
        let (s, f) = cone(4, &[-1, 1, -2, 2]);
        assert_eq!(classify_vertex(&s, &f, 0).unwrap(), VertexKind::Saddle(1));
        let (s, f) = cone(6, &[-1, 1, -2, 2, -3, 3]);
        assert_eq!(classify_vertex(&s, &f, 0).unwrap(), VertexKind::Saddle(2));
        let (s, f) = cone(6, &[-1, -2, 1, 2, 3, 4]);
        assert_eq!(classify_vertex(&s, &f, 0).unwrap(), VertexKind::Regular);
        assert!(matches!(classify_vertex(&s, &f, 1), Err(FunctionError::BoundaryVertex { .. })));
    }

    #[test]
    fn monkey_saddle_by_enumeration() {
        // count lower-link runs independently by scanning the rim cyclically
        let rim = [-1, 1, -2, 2, -3, 3];
        let lower: Vec<bool> = rim.iter().map(|&x| x < 0).collect();
        let mut components = 0;
        for i in 0..lower.len() {
            if lower[i] && !lower[(i + lower.len() - 1) % lower.len()] {
                components += 1;
            }
        }
        assert_eq!(components, 3);
        let (s, f) = cone(6, &rim);
        assert_eq!(classify_vertex(&s, &f, 0).unwrap(), VertexKind::Saddle(components - 1));
    }

    #[test]
    fn non_monotone_quad_is_rejected() {
        let s = fixtures::torus_grid(3, 3);
        let values: Vec<i64> = (0..9).map(|i| [0, 5, 1, 6, 2, 7, 3, 8, 4][i]).collect();
        let f = PlFunction::from_integers(&values);
        assert!(matches!(validate_axioms(&s, &f), Err(FunctionError::NonMonotoneFace { .. })));
    }

    #[test]
    fn circle_values_take_the_short_way() {
        let f = PlFunction::new(vec![q(9, 10), q(1, 10)], Target::Circle);
        assert_eq!(f.difference(f.value(0), f.value(1)), Some(q(1, 5)));
        assert_eq!(f.difference(f.value(1), f.value(0)), Some(q(-1, 5)));
        assert_eq!(f.difference(&q(0, 1), &q(1, 2)), None);
        assert_eq!(f.lifts_between(&q(1, 4), &q(-1, 1), &q(2, 1)), vec![q(-3, 4), q(1, 4), q(5, 4)]);
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(format_rational(&q(-1, 3)), "-1/3");
    }
}
