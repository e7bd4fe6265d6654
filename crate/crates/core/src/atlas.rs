//! Bands, atoms and canonical neighbourhoods.
//!
//! Every special value `c` gets a closed band `[lo, hi]` around it containing
//! no other special value. The atom of a critical component is the connected
//! piece of the preimage of its band that contains it, and its canonical
//! neighbourhood is the atom together with every complementary piece that is
//! a disk. Everything is computed on the refinement held by a
//! [`Foliation`], where band preimages are unions of faces.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::One;
use thiserror::Error;

use crate::complex::{complement_of_faces, ComplexError, Subsurface, SurfaceClass, SurfaceComplex};
use crate::foliation::Foliation;
use crate::function::{format_rational, FunctionError, PlFunction, Rational, Target};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("band [{lo}, {hi}] around {center} also contains the special value {other}")]
    BandContainsOtherCritical { center: String, lo: String, hi: String, other: String },
    #[error("the surface is a 2-disk")]
    SurfaceIsDisk,
    #[error("a component of the subsurface is a 2-disk")]
    DiskComponentInN,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Closed interval `[lo, hi]` of lifted values around `center`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Band {
    pub center: Rational,
    pub lo: Rational,
    pub hi: Rational,
}

impl Band {
    /// Whether some lift of `x` lies in the open interval `(lo, hi)`.
    pub fn contains_open(&self, target: Target, x: &Rational) -> bool {
        match target {
            Target::Line => &self.lo < x && x < &self.hi,
            Target::Circle => {
                let shift = (&self.lo - x).floor() + Rational::one();
                let lifted = x + shift;
                lifted < self.hi
            }
        }
    }

    /// Whether some lift of `x` lies in `[lo, hi]`.
    pub fn contains(&self, target: Target, x: &Rational) -> bool {
        match target {
            Target::Line => &self.lo <= x && x <= &self.hi,
            Target::Circle => {
                let shift = (&self.lo - x).ceil();
                let lifted = x + shift;
                lifted <= self.hi
            }
        }
    }
}

impl std::fmt::Display for Band {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

/// Bands around sorted distinct levels: each reaches a quarter of the way to
/// its neighbours. A level without a neighbour on one side mirrors the gap on
/// the other side; a lone level on the line gets width one. Circle levels are
/// read cyclically, so a lone circle level sees a gap of one on both sides.
pub fn choose_bands(levels: &[Rational], target: Target) -> Vec<Band> {
    let n = levels.len();
    let four = Rational::from_integer(4.into());
    let half = crate::function::half();
    let mut bands = Vec::with_capacity(n);
    for i in 0..n {
        let c = &levels[i];
        let (below, above) = match target {
            Target::Line => {
                let below = (i > 0).then(|| c - &levels[i - 1]);
                let above = (i + 1 < n).then(|| &levels[i + 1] - c);
                match (below, above) {
                    (Some(b), Some(a)) => (b / &four, a / &four),
                    (Some(b), None) => (b.clone() / &four, b / &four),
                    (None, Some(a)) => (a.clone() / &four, a / &four),
                    (None, None) => (half.clone(), half.clone()),
                }
            }
            Target::Circle => {
                let one = Rational::one();
                let prev = if i > 0 { levels[i - 1].clone() } else { &levels[n - 1] - &one };
                let next = if i + 1 < n { levels[i + 1].clone() } else { &levels[0] + &one };
                ((c - prev) / &four, (next - c) / &four)
            }
        };
        bands.push(Band { center: c.clone(), lo: c - below, hi: c + above });
    }
    bands
}

/// Atom of one critical component: a union of refined faces.
#[derive(Clone, Debug)]
pub struct Atom {
    pub component: usize,
    pub band: usize,
    pub cells: Subsurface,
    /// Boundary circles in refined edge indices.
    pub boundary_circles: Vec<Vec<crate::complex::Side>>,
}

#[derive(Clone, Debug)]
pub struct CanonicalNbhd {
    pub component: usize,
    pub cells: Subsurface,
    pub class: SurfaceClass,
    pub is_disk: bool,
    pub euler_char: i64,
    /// Disk pieces of the atom's complement that were added.
    pub added_disks: usize,
}

/// Atoms and canonical neighbourhoods of every critical component.
#[derive(Clone, Debug)]
pub struct Atlas {
    pub foliation: Foliation,
    pub atoms: Vec<Atom>,
    pub canonical: Vec<CanonicalNbhd>,
}

impl Atlas {
    pub fn new(s: &SurfaceComplex, f: &PlFunction) -> Result<Atlas, AtlasError> {
        Atlas::from_foliation(Foliation::new(s, f)?)
    }

    pub fn from_foliation(foliation: Foliation) -> Result<Atlas, AtlasError> {
        let mut atoms = Vec::with_capacity(foliation.components.len());
        for k in 0..foliation.components.len() {
            let band = foliation.components[k].level_index;
            atoms.push(atom(&foliation, k, &foliation.bands[band], band)?);
        }
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                if !atoms[i].cells.is_disjoint_from(&atoms[j].cells) {
                    return Err(AtlasError::Invariant(format!("atoms of components {i} and {j} overlap")));
                }
            }
        }
        let canonical =
            atoms.iter().map(|a| canonical_neighborhood(&foliation, a)).collect::<Result<Vec<_>, _>>()?;
        Ok(Atlas { foliation, atoms, canonical })
    }

    pub fn refined(&self) -> &SurfaceComplex {
        &self.foliation.refined.complex
    }

    pub fn surface_class(&self) -> Result<SurfaceClass, AtlasError> {
        Ok(self.foliation.surface.classify()?)
    }
}

/// Faces of the refined complex whose values lie in the open band.
fn band_faces(fol: &Foliation, band: &Band) -> BTreeSet<usize> {
    let r = &fol.refined;
    (0..r.complex.face_count()).filter(|&face| band.contains_open(r.target(), &r.face_midpoint(face))).collect()
}

/// The atom of component `k` over `band`.
pub fn atom(fol: &Foliation, k: usize, band: &Band, band_index: usize) -> Result<Atom, AtlasError> {
    let target = fol.function.target();
    for level in fol.levels() {
        if level.value != band.center && band.contains(target, &level.value) {
            return Err(AtlasError::BandContainsOtherCritical {
                center: format_rational(&band.center),
                lo: format_rational(&band.lo),
                hi: format_rational(&band.hi),
                other: format_rational(&level.value),
            });
        }
    }
    let r = &fol.refined;
    let s = &r.complex;
    let inside = band_faces(fol, band);
    let component = &fol.components[k];
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &v in &component.vertices {
        for c in &s.link(v).corners {
            if inside.contains(&c.face) && seen.insert(c.face) {
                queue.push_back(c.face);
            }
        }
    }
    while let Some(face) = queue.pop_front() {
        for (i, _) in s.face(face).iter().enumerate() {
            if let Some(other) = s.across(face, i) {
                if inside.contains(&other.face) && seen.insert(other.face) {
                    queue.push_back(other.face);
                }
            }
        }
    }
    let cells = Subsurface::new(s, seen)?;
    check_atom_boundary(fol, band, &cells)?;
    let boundary_circles = cells.induced_boundary();
    Ok(Atom { component: k, band: band_index, cells, boundary_circles })
}

/// The boundary of an atom is exactly its intersection with the preimage of
/// the band's endpoints.
fn check_atom_boundary(fol: &Foliation, band: &Band, cells: &Subsurface) -> Result<(), AtlasError> {
    let r = &fol.refined;
    let f = &r.function;
    let ends = [f.normalize(&band.lo), f.normalize(&band.hi)];
    let boundary = cells.boundary_edges();
    for &e in &boundary {
        let [a, b] = r.complex.endpoints(e);
        if !ends.contains(f.value(a)) || f.value(a) != f.value(b) {
            return Err(AtlasError::Invariant(format!("atom boundary edge {e} is not on an end of the band")));
        }
    }
    let boundary_vertices: BTreeSet<usize> =
        boundary.iter().flat_map(|&e| r.complex.endpoints(e)).collect();
    for &v in cells.parent_vertices() {
        if ends.contains(f.value(v)) && !boundary_vertices.contains(&v) {
            return Err(AtlasError::Invariant(format!("vertex {v} at a band end lies inside an atom")));
        }
    }
    Ok(())
}

/// Atom plus all disk components of its complement.
pub fn canonical_neighborhood(fol: &Foliation, a: &Atom) -> Result<CanonicalNbhd, AtlasError> {
    let s = &fol.refined.complex;
    let (cells, added_disks) = completion(s, &a.cells)?;
    let class = cells.classify()?;
    if !class.is_disk() && cells.faces().len() < s.face_count() && !is_incompressible(s, &cells)? {
        return Err(AtlasError::Invariant(format!("canonical neighbourhood of component {} is compressible", a.component)));
    }
    Ok(CanonicalNbhd { component: a.component, euler_char: class.euler_char, is_disk: class.is_disk(), class, cells, added_disks })
}

fn completion(s: &SurfaceComplex, r: &Subsurface) -> Result<(Subsurface, usize), AtlasError> {
    if r.faces().len() == s.face_count() {
        return Ok((r.clone(), 0));
    }
    let mut faces: BTreeSet<usize> = r.faces().iter().copied().collect();
    let mut added = 0;
    for piece in complement_of_faces(s, r.faces())? {
        if piece.classify()?.is_disk() {
            faces.extend(piece.faces().iter().copied());
            added += 1;
        }
    }
    Ok((Subsurface::new(s, faces)?, added))
}

/// `R` together with every complementary disk.
pub fn canonical_completion(s: &SurfaceComplex, r: &Subsurface) -> Result<Subsurface, AtlasError> {
    Ok(completion(s, r)?.0)
}

/// Whether the connected subsurface `R` lies in a disk of `M`.
pub fn contained_in_disk(s: &SurfaceComplex, r: &Subsurface) -> Result<bool, AtlasError> {
    Ok(canonical_completion(s, r)?.classify()?.is_disk())
}

/// A proper subsurface without disk components is incompressible when no
/// component of its complement is a disk.
pub fn is_incompressible(s: &SurfaceComplex, n: &Subsurface) -> Result<bool, AtlasError> {
    for c in n.components(s) {
        if c.classify()?.is_disk() {
            return Err(AtlasError::DiskComponentInN);
        }
    }
    for piece in complement_of_faces(s, n.faces())? {
        if piece.classify()?.is_disk() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of summing Euler characteristics over non-disk canonical
/// neighbourhoods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiSum {
    /// Components whose canonical neighbourhoods are not disks, one per
    /// distinct neighbourhood.
    pub components: Vec<usize>,
    /// Further components sharing a neighbourhood with one listed above;
    /// only possible when that neighbourhood is the whole sphere or
    /// projective plane.
    pub duplicates: Vec<usize>,
    pub sum: i64,
    pub euler_char: i64,
    pub equal: bool,
    /// Every piece of the complement of their union is a cylinder.
    pub complement_cylinders: bool,
    /// Set when the surface is a sphere or projective plane.
    pub closed_exception: Option<SurfaceClass>,
}

pub fn chi_sum_check(atlas: &Atlas) -> Result<ChiSum, AtlasError> {
    let class = atlas.surface_class()?;
    if class.is_disk() {
        return Err(AtlasError::SurfaceIsDisk);
    }
    let s = atlas.refined();
    let mut components: Vec<usize> = Vec::new();
    let mut duplicates: Vec<usize> = Vec::new();
    for n in atlas.canonical.iter().filter(|n| !n.is_disk) {
        match components.iter().find(|&&k| atlas.canonical[k].cells.faces() == n.cells.faces()) {
            Some(_) => duplicates.push(n.component),
            None => components.push(n.component),
        }
    }
    if !duplicates.is_empty() && !(class.is_sphere() || class.is_projective_plane()) {
        return Err(AtlasError::Invariant("two critical components share a non-disk canonical neighbourhood".into()));
    }
    for (i, &a) in components.iter().enumerate() {
        for &b in &components[i + 1..] {
            if !atlas.canonical[a].cells.is_disjoint_from(&atlas.canonical[b].cells) {
                return Err(AtlasError::Invariant(format!(
                    "canonical neighbourhoods of components {a} and {b} overlap"
                )));
            }
        }
    }
    let sum = components.iter().map(|&k| atlas.canonical[k].euler_char).sum();
    let union: BTreeSet<usize> =
        components.iter().flat_map(|&k| atlas.canonical[k].cells.faces().iter().copied()).collect();
    let mut complement_cylinders = true;
    if union.len() < s.face_count() {
        let faces: Vec<usize> = union.iter().copied().collect();
        for piece in complement_of_faces(s, &faces)? {
            complement_cylinders &= piece.classify()?.is_cylinder();
        }
    }
    let closed_exception = (class.is_sphere() || class.is_projective_plane()).then_some(class);
    Ok(ChiSum {
        components,
        duplicates,
        sum,
        euler_char: class.euler_char,
        equal: sum == class.euler_char,
        complement_cylinders,
        closed_exception,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParentVerdict {
    /// The non-disk canonical neighbourhood containing the given one,
    /// reached through the listed chain of disk neighbourhoods.
    Canonical { component: usize, path: Vec<usize> },
    MIsDisk,
}

/// Finds the non-disk canonical neighbourhood containing the disk
/// neighbourhood of component `k`, stepping outwards across the regular
/// cylinders between atoms.
pub fn parent_canonical(atlas: &Atlas, k: usize) -> Result<ParentVerdict, AtlasError> {
    if atlas.surface_class()?.is_disk() {
        return Ok(ParentVerdict::MIsDisk);
    }
    if !atlas.canonical[k].is_disk {
        return Err(AtlasError::Invariant(format!("canonical neighbourhood of component {k} is not a disk")));
    }
    let s = atlas.refined();
    let owner = atom_owner(atlas);
    let mut current = k;
    let mut path = vec![k];
    loop {
        let disk = &atlas.canonical[current].cells;
        let next = step_outwards(atlas, s, disk, &owner)?;
        let Some(next) = next else {
            return Err(AtlasError::Invariant(format!("no atom lies outside the disk around component {current}")));
        };
        let outer = &atlas.canonical[next];
        if !disk.is_subset_of(&outer.cells) {
            return Err(AtlasError::Invariant(format!(
                "canonical neighbourhood of component {next} does not contain that of {current}"
            )));
        }
        if !outer.is_disk {
            return Ok(ParentVerdict::Canonical { component: next, path });
        }
        if path.contains(&next) {
            return Err(AtlasError::Invariant("disk neighbourhoods form a cycle".into()));
        }
        path.push(next);
        current = next;
    }
}

/// For each refined face inside an atom, the component owning it.
fn atom_owner(atlas: &Atlas) -> BTreeMap<usize, usize> {
    let mut owner = BTreeMap::new();
    for a in &atlas.atoms {
        for &face in a.cells.faces() {
            owner.insert(face, a.component);
        }
    }
    owner
}

/// Walks from the boundary of `disk` through faces outside every atom until
/// reaching an atom that is not inside `disk`.
fn step_outwards(
    atlas: &Atlas,
    s: &SurfaceComplex,
    disk: &Subsurface,
    owner: &BTreeMap<usize, usize>,
) -> Result<Option<usize>, AtlasError> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for e in disk.boundary_edges() {
        for c in s.sides_of(e) {
            if !disk.contains_face(c.face) && seen.insert(c.face) {
                queue.push_back(c.face);
            }
        }
    }
    while let Some(face) = queue.pop_front() {
        if let Some(&k) = owner.get(&face) {
            if atlas.atoms[k].cells.faces().iter().all(|f| !disk.contains_face(*f)) {
                return Ok(Some(k));
            }
            continue;
        }
        for i in 0..s.face(face).len() {
            if let Some(other) = s.across(face, i) {
                if !disk.contains_face(other.face) && seen.insert(other.face) {
                    queue.push_back(other.face);
                }
            }
        }
    }
    Ok(None)
}
