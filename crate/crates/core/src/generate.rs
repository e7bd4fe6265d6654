//! Deterministic instance generators.
//!
//! Two families are produced:
//!
//! * **Towers.** A surface is swept upwards by a program of events, one per
//!   integer level: caps and cups create and close circles at minima and
//!   maxima, splits and merges pass through ordinary saddles, twists through
//!   a saddle whose atom is non-orientable, and boundary events start or end
//!   at a boundary circle. Circles between events are rings of eight
//!   vertices whose heights are jittered slightly so that no interior edge is
//!   flat. The resulting height function is known by construction.
//! * **Word surfaces.** A single polygon with edge identifications given by a
//!   word, triangulated with a centre and an inner ring, carrying random
//!   distinct values.

use std::collections::HashMap;

use num_traits::Zero;
use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{ComplexError, SurfaceComplex};
use crate::fixtures::polygon_complex;
use crate::function::{PlFunction, Rational, Target};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("unsupported surface kind: {0}")]
    UnsupportedKind(String),
    #[error("event {index} refers to a circle that is not open")]
    NoSuchCircle { index: usize },
    #[error("program leaves {0} circles open")]
    OpenCircles(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// One step of a tower program. Circle arguments index the currently open
/// circles; consumed circles are removed and new ones appended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    Cap,
    Cup(usize),
    Split(usize),
    Merge(usize, usize),
    Twist(usize),
    BoundaryIn,
    BoundaryOut(usize),
}

const RING: usize = 8;
const LOOP: usize = 4;
/// Jitter numerators are drawn from `1..JITTER` over `JITTER_DEN`.
const JITTER: i64 = 50;
const JITTER_DEN: i64 = 1000;

struct Tower<'r> {
    rng: &'r mut ChaCha8Rng,
    values: Vec<Rational>,
    triangles: Vec<Vec<usize>>,
    open: Vec<Vec<usize>>,
}

fn level(t: i64, half_steps: i64) -> Rational {
    Rational::new((2 * t + half_steps).into(), 2.into())
}

impl Tower<'_> {
    fn vertex(&mut self, value: Rational) -> usize {
        self.values.push(value);
        self.values.len() - 1
    }

    /// Distinct jitters for `n` vertices, each in `(0, 1/20)`, with random
    /// signs when `signed`.
    fn jitters(&mut self, n: usize, signed: bool) -> Vec<Rational> {
        let mut pool: Vec<i64> = (1..JITTER).collect();
        pool.shuffle(self.rng);
        pool.truncate(n);
        pool.into_iter()
            .map(|k| {
                let k = if signed && self.rng.gen_bool(0.5) { -k } else { k };
                Rational::new(k.into(), JITTER_DEN.into())
            })
            .collect()
    }

    fn ring(&mut self, base: Rational, n: usize, exact: bool) -> Vec<usize> {
        let offsets = if exact { vec![Rational::zero(); n] } else { self.jitters(n, false) };
        offsets.into_iter().map(|d| self.vertex(&base + d)).collect()
    }

    /// Annulus of triangles between two closed walks.
    fn zip(&mut self, p: &[usize], q: &[usize]) {
        let (m, n) = (p.len(), q.len());
        let (mut i, mut j) = (0, 0);
        while i < m || j < n {
            if i < m && (j == n || i * n <= j * m) {
                self.triangles.push(vec![p[i % m], p[(i + 1) % m], q[j % n]]);
                i += 1;
            } else {
                self.triangles.push(vec![p[i % m], q[(j + 1) % n], q[j % n]]);
                j += 1;
            }
        }
    }

    fn cone(&mut self, apex: usize, ring: &[usize]) {
        for i in 0..ring.len() {
            self.triangles.push(vec![apex, ring[i], ring[(i + 1) % ring.len()]]);
        }
    }

    /// A saddle vertex at level `t` with two loops of jittered vertices.
    fn figure_eight(&mut self, t: i64) -> (usize, Vec<usize>, Vec<usize>) {
        let s = self.vertex(level(t, 0));
        let jit = self.jitters(2 * (LOOP - 1), true);
        let mut a = vec![s];
        let mut b = vec![s];
        for (k, d) in jit.into_iter().enumerate() {
            let v = self.vertex(level(t, 0) + d);
            if k < LOOP - 1 {
                a.push(v);
            } else {
                b.push(v);
            }
        }
        (s, a, b)
    }

    fn take(&mut self, index: usize) -> Result<Vec<usize>, GenerateError> {
        if index >= self.open.len() {
            return Err(GenerateError::NoSuchCircle { index });
        }
        Ok(self.open.remove(index))
    }

    fn run(&mut self, t: i64, event: Event) -> Result<(), GenerateError> {
        let above = level(t, 1);
        // circles untouched by the event continue upwards
        let touched: Vec<usize> = match event {
            Event::Cap | Event::BoundaryIn => vec![],
            Event::Cup(i) | Event::Split(i) | Event::Twist(i) | Event::BoundaryOut(i) => vec![i],
            Event::Merge(i, j) => {
                if i == j {
                    return Err(GenerateError::NoSuchCircle { index: j });
                }
                vec![i, j]
            }
        };
        if let Some(&bad) = touched.iter().find(|&&i| i >= self.open.len()) {
            return Err(GenerateError::NoSuchCircle { index: bad });
        }
        for k in 0..self.open.len() {
            if !touched.contains(&k) {
                let old = self.open[k].clone();
                let new = self.ring(above.clone(), RING, false);
                self.zip(&old, &new);
                self.open[k] = new;
            }
        }
        match event {
            Event::Cap => {
                let apex = self.vertex(level(t, 0));
                let ring = self.ring(above, RING, false);
                self.cone(apex, &ring);
                self.open.push(ring);
            }
            Event::Cup(i) => {
                let ring = self.take(i)?;
                let apex = self.vertex(level(t, 0));
                self.cone(apex, &ring);
            }
            Event::BoundaryIn => {
                let edge = self.ring(level(t, 0), RING, true);
                let ring = self.ring(above, RING, false);
                self.zip(&edge, &ring);
                self.open.push(ring);
            }
            Event::BoundaryOut(i) => {
                let ring = self.take(i)?;
                let edge = self.ring(level(t, 0), RING, true);
                self.zip(&ring, &edge);
            }
            Event::Split(i) => {
                let ring = self.take(i)?;
                let (_, a, b) = self.figure_eight(t);
                let walk: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                self.zip(&ring, &walk);
                for lobe in [a, b] {
                    let out = self.ring(above.clone(), RING, false);
                    self.zip(&lobe, &out);
                    self.open.push(out);
                }
            }
            Event::Merge(i, j) => {
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                let first = self.take(hi)?;
                let second = self.take(lo)?;
                let (_, a, b) = self.figure_eight(t);
                self.zip(&first, &a);
                self.zip(&second, &b);
                let walk: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                let out = self.ring(above, RING, false);
                self.zip(&walk, &out);
                self.open.push(out);
            }
            Event::Twist(i) => {
                let ring = self.take(i)?;
                let (s, a, b) = self.figure_eight(t);
                let lower: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                let mut upper = a.clone();
                upper.push(s);
                upper.extend(b[1..].iter().rev());
                self.zip(&ring, &lower);
                let out = self.ring(above, RING, false);
                self.zip(&upper, &out);
                self.open.push(out);
            }
        }
        Ok(())
    }
}

/// Builds a tower surface from a closed program.
pub fn tower(events: &[Event], seed: u64) -> Result<(SurfaceComplex, PlFunction), GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = Tower { rng: &mut rng, values: Vec::new(), triangles: Vec::new(), open: Vec::new() };
    for (t, &event) in events.iter().enumerate() {
        state.run(t as i64, event)?;
    }
    if !state.open.is_empty() {
        return Err(GenerateError::OpenCircles(state.open.len()));
    }
    let complex = polygon_complex(state.values.len(), &state.triangles)?;
    Ok((complex, PlFunction::line(state.values)))
}

/// Builds a circle-valued tower: `circles` rings start at the bottom, the
/// program runs, and the rings left open are glued back onto the starting
/// ones. Values are rescaled so one trip round the tower is one turn.
pub fn circular_tower(circles: usize, events: &[Event], seed: u64) -> Result<(SurfaceComplex, PlFunction), GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = Tower { rng: &mut rng, values: Vec::new(), triangles: Vec::new(), open: Vec::new() };
    let mut start = Vec::new();
    for _ in 0..circles {
        let ring = state.ring(level(0, 1), RING, false);
        start.push(ring.clone());
        state.open.push(ring);
    }
    for (t, &event) in events.iter().enumerate() {
        state.run(t as i64 + 1, event)?;
    }
    if state.open.len() != circles {
        return Err(GenerateError::OpenCircles(state.open.len()));
    }
    let open = std::mem::take(&mut state.open);
    for (old, first) in open.iter().zip(start.iter()) {
        state.zip(old, first);
    }
    let period = Rational::from_integer((events.len() as i64 + 1).into());
    let values: Vec<Rational> = state.values.iter().map(|v| v / &period).collect();
    let complex = polygon_complex(values.len(), &state.triangles)?;
    Ok((complex, PlFunction::new(values, Target::Circle)))
}

/// Requested topology of a generated surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceKind {
    pub genus: u32,
    pub crosscaps: u32,
    pub boundary: u32,
}

impl SurfaceKind {
    pub fn orientable(genus: u32, boundary: u32) -> SurfaceKind {
        SurfaceKind { genus, crosscaps: 0, boundary }
    }

    pub fn non_orientable(crosscaps: u32, boundary: u32) -> SurfaceKind {
        SurfaceKind { genus: 0, crosscaps, boundary }
    }

    pub fn euler_char(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.crosscaps as i64 - self.boundary as i64
    }

    /// Parses `genus:G`, `crosscaps:K`, optionally followed by `,boundary:B`.
    pub fn parse(text: &str) -> Result<SurfaceKind, GenerateError> {
        let mut kind = SurfaceKind { genus: 0, crosscaps: 0, boundary: 0 };
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once(':').ok_or_else(|| GenerateError::UnsupportedKind(text.into()))?;
            let value: u32 = value.trim().parse().map_err(|_| GenerateError::UnsupportedKind(text.into()))?;
            match key.trim() {
                "genus" => kind.genus = value,
                "crosscaps" => kind.crosscaps = value,
                "boundary" => kind.boundary = value,
                "sphere" => {}
                _ => return Err(GenerateError::UnsupportedKind(text.into())),
            }
        }
        if kind.genus > 0 && kind.crosscaps > 0 {
            return Err(GenerateError::UnsupportedKind(text.into()));
        }
        if kind.genus > 8 || kind.crosscaps > 8 || kind.boundary > 8 {
            return Err(GenerateError::UnsupportedKind(text.into()));
        }
        Ok(kind)
    }
}

/// A plain program for `kind`, with `extras` random dimples and bumps mixed
/// in by `rng`.
pub fn program(kind: SurfaceKind, extras: usize, rng: &mut ChaCha8Rng) -> Vec<Event> {
    use Event::*;
    // every step starts and ends with a single open circle
    let mut steps: Vec<u8> = Vec::new();
    steps.extend(std::iter::repeat_n(0, kind.genus as usize));
    steps.extend(std::iter::repeat_n(1, kind.crosscaps as usize));
    steps.extend(std::iter::repeat_n(2, kind.boundary.saturating_sub(1) as usize));
    steps.extend(std::iter::repeat_n(3, extras));
    steps.shuffle(rng);
    let mut events = vec![if kind.boundary > 0 { BoundaryIn } else { Cap }];
    for step in steps {
        match step {
            0 => events.extend([Split(0), Merge(0, 1)]),
            1 => events.push(Twist(0)),
            2 => events.extend([Split(0), BoundaryOut(rng.gen_range(0..2))]),
            _ if rng.gen_bool(0.5) => events.extend([Cap, Merge(0, 1)]),
            _ => events.extend([Split(0), Cup(rng.gen_range(0..2))]),
        }
    }
    events.push(Cup(0));
    events
}

/// A random tower surface of the given kind.
pub fn generate(kind: SurfaceKind, seed: u64) -> Result<(SurfaceComplex, PlFunction), GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extras = rng.gen_range(0..3);
    let events = program(kind, extras, &mut rng);
    tower(&events, rng.gen())
}

/// Upright genus-two surface with a dimple on the neck between its handles:
/// the two middle saddles are the only components whose canonical
/// neighbourhoods have negative Euler characteristic, and the dimple keeps
/// their atoms apart.
pub fn genus_two_flagship() -> (SurfaceComplex, PlFunction) {
    use Event::*;
    let events = [Cap, Split(0), Merge(0, 1), Cap, Merge(0, 1), Split(0), Merge(0, 1), Cup(0)];
    tower(&events, 0).expect("flagship program is closed")
}

/// Round sphere: one minimum and one maximum.
pub fn sphere_height() -> (SurfaceComplex, PlFunction) {
    tower(&[Event::Cap, Event::Cup(0)], 0).expect("sphere program is closed")
}

/// Upright torus: minimum, two saddles, maximum.
pub fn torus_height() -> (SurfaceComplex, PlFunction) {
    use Event::*;
    tower(&[Cap, Split(0), Merge(0, 1), Cup(0)], 0).expect("torus program is closed")
}

/// Pair of pants with a single saddle.
pub fn pair_of_pants() -> (SurfaceComplex, PlFunction) {
    use Event::*;
    tower(&[BoundaryIn, Split(0), BoundaryOut(0), BoundaryOut(0)], 0).expect("pants program is closed")
}

/// One letter of a polygon word: a paired edge (`Some((name, inverse))`) or a
/// free boundary edge (`None`).
pub type Letter = Option<(usize, bool)>;

/// Standard word for a closed surface: `a1 b1 a1' b1' ...` or `a1 a1 a2 a2 ...`.
pub fn standard_word(kind: SurfaceKind) -> Vec<Letter> {
    let mut word = Vec::new();
    if kind.crosscaps > 0 {
        for k in 0..kind.crosscaps as usize {
            word.push(Some((k, false)));
            word.push(Some((k, false)));
        }
    } else if kind.genus == 0 {
        word.push(Some((0, false)));
        word.push(Some((0, true)));
    } else {
        for k in 0..kind.genus as usize {
            let (a, b) = (2 * k, 2 * k + 1);
            word.extend([Some((a, false)), Some((b, false)), Some((a, true)), Some((b, true))]);
        }
    }
    // each hole is a free letter wrapped in its own paired letter
    let first_free = word.len() + 1;
    for k in 0..kind.boundary as usize {
        let d = 2 * first_free + k;
        word.extend([Some((d, false)), None, Some((d, true))]);
    }
    word
}

/// The `4g + 2`-gon with opposite sides glued by translation, a closed
/// orientable surface of genus `g` with a rotation of order `4g + 2`.
pub fn hyperelliptic_word(genus: usize) -> Vec<Letter> {
    let n = 2 * genus + 1;
    (0..n).map(|k| Some((k, false))).chain((0..n).map(|k| Some((k, true)))).collect()
}

/// The `2n`-gon with antipodal sides glued, a projective plane.
pub fn antipodal_word(n: usize) -> Vec<Letter> {
    (0..2 * n).map(|k| Some((k % n, false))).collect()
}

/// Closed surfaces with many cellular automorphisms, at least two per
/// topological type from the sphere up to genus three and up to three
/// crosscaps.
pub fn symmetric_surfaces() -> Vec<(SurfaceKind, SurfaceComplex)> {
    use crate::fixtures;
    let mut out = Vec::new();
    for g in 0..=3 {
        let kind = SurfaceKind::orientable(g, 0);
        out.push((kind, word_surface(&standard_word(kind)).expect("standard words are valid")));
        if g > 0 {
            out.push((kind, word_surface(&hyperelliptic_word(g as usize)).expect("hyperelliptic words are valid")));
        }
    }
    for k in 1..=3 {
        let kind = SurfaceKind::non_orientable(k, 0);
        out.push((kind, word_surface(&standard_word(kind)).expect("standard words are valid")));
    }
    let sphere = SurfaceKind::orientable(0, 0);
    let torus = SurfaceKind::orientable(1, 0);
    let plane = SurfaceKind::non_orientable(1, 0);
    out.push((sphere, fixtures::octahedron()));
    out.push((sphere, fixtures::icosahedron()));
    out.push((torus, fixtures::torus_grid(3, 3)));
    out.push((torus, fixtures::torus_grid(4, 4)));
    out.push((SurfaceKind::non_orientable(2, 0), fixtures::klein_grid(4, 4)));
    out.push((plane, fixtures::hemicube()));
    for n in 2..=3 {
        out.push((plane, word_surface(&antipodal_word(n)).expect("antipodal words are valid")));
    }
    out
}

/// Triangulated polygon with boundary letters identified in pairs. Each
/// letter becomes three segments; the polygon is filled by an inner ring and
/// a central vertex, so the result has no loops or parallel edges.
pub fn word_surface(word: &[Letter]) -> Result<SurfaceComplex, GenerateError> {
    const SEG: usize = 3;
    let letters = word.len();
    let outer = letters * SEG;
    let mut uf = UnionFind::<usize>::new(outer);
    let mut seen: HashMap<usize, (usize, bool)> = HashMap::new();
    for (pos, letter) in word.iter().enumerate() {
        let Some((name, inverse)) = *letter else { continue };
        match seen.remove(&name) {
            None => {
                seen.insert(name, (pos, inverse));
            }
            Some((other, other_inverse)) => {
                // point k along a letter, read in the letter's own direction
                let along = |p: usize, inv: bool, k: usize| {
                    let k = if inv { SEG - k } else { k };
                    (p * SEG + k) % outer
                };
                for k in 0..=SEG {
                    uf.union(along(pos, inverse, k), along(other, other_inverse, k));
                }
            }
        }
    }
    if !seen.is_empty() {
        return Err(GenerateError::UnsupportedKind("unpaired letter in word".into()));
    }
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut boundary_vertex = Vec::with_capacity(outer);
    for p in 0..outer {
        let root = uf.find(p);
        let n = index.len();
        boundary_vertex.push(*index.entry(root).or_insert(n));
    }
    let base = index.len();
    let ring: Vec<usize> = (0..outer).map(|k| base + k).collect();
    let centre = base + outer;
    let mut faces = Vec::new();
    for k in 0..outer {
        let k1 = (k + 1) % outer;
        faces.push(vec![boundary_vertex[k], boundary_vertex[k1], ring[k1]]);
        faces.push(vec![boundary_vertex[k], ring[k1], ring[k]]);
        faces.push(vec![centre, ring[k], ring[k1]]);
    }
    Ok(polygon_complex(centre + 1, &faces)?)
}

/// Random distinct interior values in `(0, 1)`; each boundary circle sits
/// at its own negative integer.
pub fn random_values(s: &SurfaceComplex, seed: u64) -> PlFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = s.vertex_count();
    let mut ranks: Vec<i64> = (1..=n as i64).collect();
    ranks.shuffle(&mut rng);
    let den = n as i64 + 1;
    let mut values: Vec<Rational> = ranks.into_iter().map(|r| Rational::new(r.into(), den.into())).collect();
    for (k, circle) in s.boundary_circles().iter().enumerate() {
        let level = -Rational::from_integer((k as i64 + 1).into());
        for side in circle {
            values[s.side_start(*side)] = level.clone();
        }
    }
    PlFunction::line(values)
}

/// A word surface of the given kind with random values.
pub fn random_word_instance(kind: SurfaceKind, seed: u64) -> Result<(SurfaceComplex, PlFunction), GenerateError> {
    let s = word_surface(&standard_word(kind))?;
    let f = random_values(&s, seed);
    Ok((s, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{critical_vertices, morse_sum, validate_axioms, VertexKind};

    fn kinds(s: &SurfaceComplex, f: &PlFunction) -> (usize, usize, Vec<u32>) {
        let crit = critical_vertices(s, f).unwrap();
        let mins = crit.iter().filter(|c| c.kind == VertexKind::Min).count();
        let maxs = crit.iter().filter(|c| c.kind == VertexKind::Max).count();
        let saddles = crit
            .iter()
            .filter_map(|c| match c.kind {
                VertexKind::Saddle(m) => Some(m),
                _ => None,
            })
            .collect();
        (mins, maxs, saddles)
    }

    #[test]
    fn torus_tower_is_an_upright_torus() {
        let (s, f) = torus_height();
        let class = s.classify().unwrap();
        assert!(class.orientable && class.genus_or_crosscaps == 1 && class.boundary_count == 0);
        validate_axioms(&s, &f).unwrap();
        assert_eq!(kinds(&s, &f), (1, 1, vec![1, 1]));
    }

    #[test]
    fn flagship_is_genus_two() {
        let (s, f) = genus_two_flagship();
        assert_eq!(s.euler_characteristic(), -2);
        assert!(s.is_orientable());
        validate_axioms(&s, &f).unwrap();
        let (mins, maxs, saddles) = kinds(&s, &f);
        assert_eq!((mins, maxs, saddles.len()), (2, 1, 5));
        assert_eq!(morse_sum(&critical_vertices(&s, &f).unwrap()), -2);
    }

    #[test]
    fn twists_make_crosscaps() {
        use Event::*;
        for k in 1..=3usize {
            let mut events = vec![Cap];
            events.extend(std::iter::repeat_n(Twist(0), k));
            events.push(Cup(0));
            let (s, f) = tower(&events, 7).unwrap();
            let class = s.classify().unwrap();
            assert!(!class.orientable, "{k} twists");
            assert_eq!(class.genus_or_crosscaps as usize, k);
            validate_axioms(&s, &f).unwrap();
            assert_eq!(kinds(&s, &f), (1, 1, vec![1; k]));
        }
    }

    #[test]
    fn pants_has_three_boundary_circles() {
        let (s, f) = pair_of_pants();
        let class = s.classify().unwrap();
        assert_eq!((class.euler_char, class.boundary_count), (-1, 3));
        let report = validate_axioms(&s, &f).unwrap();
        assert_eq!(report.critical.len(), 1);
    }

    #[test]
    fn generated_kinds_match_request() {
        for seed in 0..12u64 {
            for kind in [
                SurfaceKind::orientable(0, 0),
                SurfaceKind::orientable(2, 1),
                SurfaceKind::orientable(1, 3),
                SurfaceKind::non_orientable(2, 0),
                SurfaceKind::non_orientable(1, 2),
            ] {
                let (s, f) = generate(kind, seed).unwrap();
                let class = s.classify().unwrap();
                assert_eq!(class.euler_char, kind.euler_char(), "{kind:?} seed {seed}");
                assert_eq!(class.boundary_count as u32, kind.boundary);
                assert_eq!(class.orientable, kind.crosscaps == 0);
                let report = validate_axioms(&s, &f).unwrap();
                if s.is_closed() {
                    assert_eq!(morse_sum(&report.critical), class.euler_char);
                }
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let kind = SurfaceKind::orientable(2, 1);
        assert_eq!(generate(kind, 3).unwrap(), generate(kind, 3).unwrap());
    }

    #[test]
    fn word_surfaces_have_the_requested_type() {
        for kind in [
            SurfaceKind::orientable(0, 0),
            SurfaceKind::orientable(1, 0),
            SurfaceKind::orientable(3, 0),
            SurfaceKind::non_orientable(1, 0),
            SurfaceKind::non_orientable(3, 0),
            SurfaceKind::orientable(1, 2),
        ] {
            let s = word_surface(&standard_word(kind)).unwrap();
            let class = s.classify().unwrap();
            assert_eq!(class.euler_char, kind.euler_char(), "{kind:?}");
            assert_eq!(class.orientable, kind.crosscaps == 0);
            let f = random_values(&s, 5);
            validate_axioms(&s, &f).unwrap();
        }
    }

    #[test]
    fn symmetric_surfaces_have_their_labelled_type() {
        let surfaces = symmetric_surfaces();
        for (kind, s) in &surfaces {
            let class = s.classify().unwrap();
            assert_eq!(class.euler_char, kind.euler_char(), "{kind:?}");
            assert_eq!(class.orientable, kind.crosscaps == 0);
            assert!(s.is_closed());
        }
        for g in 0..=3 {
            assert!(surfaces.iter().filter(|(k, _)| *k == SurfaceKind::orientable(g, 0)).count() >= 2);
        }
    }

    #[test]
    fn circular_tower_closes_up() {
        // a handle swept once around the circle closes up to genus two
        let (s, f) = circular_tower(1, &[Event::Split(0), Event::Merge(0, 1)], 2).unwrap();
        assert_eq!(s.euler_characteristic(), -2);
        assert!(s.is_orientable());
        let report = validate_axioms(&s, &f).unwrap();
        assert_eq!(report.critical.len(), 2);
    }
}
