//! The property suite run by `sfol selftest`.
//!
//! Every check recomputes its claim exactly over a fixed family of
//! generated surfaces and fixtures and reports the number of cases covered
//! together with any violation found.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::atlas::{chi_sum_check, is_incompressible, Atlas};
use crate::cellular::{
    chain_complex, check_klh, induced_chain_map, invariant_cells, lefschetz_chain, orientation_double_cover,
    shrink_boundary, CellPartition, Homology,
};
use crate::complex::SurfaceComplex;
use crate::decomposition::{build_m_neg, negative_components, verify};
use crate::dot::decomposition_dot;
use crate::fixtures;
use crate::function::PlFunction;
use crate::generate::{self, Event, SurfaceKind};

/// Outcome of one property.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Number of cases the property was evaluated on.
    pub cases: usize,
    pub detail: String,
    pub violations: Vec<String>,
    #[serde(serialize_with = "seconds")]
    pub elapsed: Duration,
}

fn seconds<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl Check {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("[{status}] {}. {}: {} ({:.2} s)", self.id, self.name, self.detail, self.elapsed.as_secs_f64())
    }
}

struct Tally {
    id: u32,
    name: &'static str,
    start: Instant,
    cases: usize,
    violations: Vec<String>,
}

impl Tally {
    fn new(id: u32, name: &'static str) -> Tally {
        Tally { id, name, start: Instant::now(), cases: 0, violations: Vec::new() }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations.push(describe());
        }
    }

    fn fail(&mut self, message: String) {
        self.violations.push(message);
    }

    fn finish(self, minimum: usize, detail: String) -> Check {
        let mut violations = self.violations;
        if self.cases < minimum {
            violations.push(format!("only {} cases, at least {minimum} required", self.cases));
        }
        Check {
            id: self.id,
            name: self.name,
            passed: violations.is_empty(),
            cases: self.cases,
            detail: format!("{detail}, {} violations", violations.len()),
            violations,
            elapsed: self.start.elapsed(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(serialize_with = "seconds")]
    pub elapsed: Duration,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// A generated instance with its name.
#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub name: String,
    pub complex: SurfaceComplex,
    pub function: PlFunction,
}

fn corpus_kinds() -> Vec<SurfaceKind> {
    let orientable = (0..=3).flat_map(|g| (0..=2).map(move |b| SurfaceKind::orientable(g, b)));
    let non_orientable = (1..=3).flat_map(|k| (0..=1).map(move |b| SurfaceKind::non_orientable(k, b)));
    orientable.chain(non_orientable).collect()
}

fn kind_name(kind: SurfaceKind) -> String {
    if kind.crosscaps > 0 {
        format!("crosscaps {} boundary {}", kind.crosscaps, kind.boundary)
    } else {
        format!("genus {} boundary {}", kind.genus, kind.boundary)
    }
}

/// Tower surfaces of every type up to genus three and three crosscaps with
/// up to two boundary circles, three seeds each, plus randomly valued word
/// surfaces of small types and the named fixtures.
pub fn instance_corpus(seed: u64) -> Vec<CorpusInstance> {
    let mut out = Vec::new();
    let mut push = |name: String, (complex, function): (SurfaceComplex, PlFunction)| {
        out.push(CorpusInstance { name, complex, function })
    };
    for round in 0..3 {
        for (i, kind) in corpus_kinds().into_iter().enumerate() {
            let s = seed.wrapping_mul(1000).wrapping_add(100 * round + i as u64);
            push(format!("tower {} seed {s}", kind_name(kind)), generate::generate(kind, s).expect("corpus kinds are supported"));
        }
    }
    let small = [
        SurfaceKind::orientable(0, 0),
        SurfaceKind::orientable(1, 0),
        SurfaceKind::orientable(0, 2),
        SurfaceKind::orientable(1, 1),
        SurfaceKind::non_orientable(1, 0),
        SurfaceKind::non_orientable(2, 0),
        SurfaceKind::non_orientable(3, 0),
        SurfaceKind::non_orientable(1, 1),
        SurfaceKind::non_orientable(2, 1),
    ];
    for kind in small {
        push(format!("word {} seed {seed}", kind_name(kind)), generate::random_word_instance(kind, seed).expect("small kinds are supported"));
    }
    push("genus-two flagship".into(), generate::genus_two_flagship());
    push("upright torus".into(), generate::torus_height());
    push("pair of pants".into(), generate::pair_of_pants());
    let handle = [Event::Split(0), Event::Merge(0, 1)];
    push("circle-valued genus two".into(), generate::circular_tower(1, &handle, seed).expect("handle program closes up"));
    out
}

/// An instance of the corpus with its atlas.
pub struct Analysed<'a> {
    pub instance: &'a CorpusInstance,
    pub atlas: Result<Atlas, String>,
}

/// Builds the atlases on all available cores.
pub fn analyse(corpus: &[CorpusInstance]) -> Vec<Analysed<'_>> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(corpus.len().max(1));
    let chunk = corpus.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = corpus
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|instance| Analysed {
                            instance,
                            atlas: Atlas::new(&instance.complex, &instance.function).map_err(|e| e.to_string()),
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("atlas threads do not panic")).collect()
    })
}

/// Chain and homology Lefschetz numbers agree for every automorphism of the
/// symmetric closed surfaces.
pub fn hopf_trace() -> Check {
    let mut t = Tally::new(1, "Hopf trace equality");
    let mut kinds = std::collections::BTreeSet::new();
    for (kind, s) in generate::symmetric_surfaces() {
        let p = CellPartition::from_complex(&s);
        let homology = match chain_complex(&p) {
            Ok(cc) => Homology::compute(&cc),
            Err(e) => {
                t.fail(format!("{kind:?}: {e}"));
                continue;
            }
        };
        kinds.insert((kind.genus, kind.crosscaps));
        for h in p.automorphisms() {
            match induced_chain_map(&p, &h) {
                Ok(cm) => {
                    let (chain, hom) = (lefschetz_chain(&cm), homology.lefschetz(&cm));
                    t.case(chain == hom, || format!("{kind:?}: chain {chain}, homology {hom}"));
                }
                Err(e) => t.fail(format!("{kind:?}: {e}")),
            }
        }
    }
    if kinds.len() < 7 {
        t.fail(format!("only {} surface types covered", kinds.len()));
    }
    let detail = format!("{} automorphisms over {} surface types", t.cases, kinds.len());
    t.finish(200, detail)
}

/// The counting identity for every orientation preserving non-trivial
/// automorphism of the octahedron, the 4×4 torus and the icosahedron.
pub fn counting_identity() -> Check {
    let mut t = Tally::new(2, "invariant cells equal L(h)");
    let surfaces = [("octahedron", fixtures::octahedron()), ("torus 4x4", fixtures::torus_grid(4, 4)), ("icosahedron", fixtures::icosahedron())];
    for (name, s) in surfaces {
        let p = CellPartition::from_complex(&s);
        let homology = Homology::compute(&chain_complex(&p).expect("closed fixtures are cellular"));
        for h in p.automorphisms() {
            if h.preserves_orientation(&s) != Some(true) || h.is_delta_trivial() {
                continue;
            }
            match check_klh(&p, &h) {
                Ok(r) => {
                    let cm = induced_chain_map(&p, &h).expect("automorphisms induce chain maps");
                    let hom = homology.lefschetz(&cm);
                    t.case(r.holds() && hom == r.lefschetz, || {
                        format!("{name}: invariant {:?}, traces {:?}, L = {}, homology L = {hom}", r.invariant.counts(), r.traces, r.lefschetz)
                    });
                }
                Err(e) => t.fail(format!("{name}: {e}")),
            }
        }
    }
    let detail = format!("{} maps", t.cases);
    t.finish(1, detail)
}

/// Euler characteristics of the non-disk canonical neighbourhoods add up to
/// that of the surface.
pub fn chi_sum(analysed: &[Analysed<'_>]) -> Check {
    let mut t = Tally::new(3, "χ(M) = Σ χ(N̂(K))");
    for a in analysed {
        let name = &a.instance.name;
        let atlas = match &a.atlas {
            Ok(atlas) => atlas,
            Err(e) => {
                t.fail(format!("{name}: {e}"));
                continue;
            }
        };
        match atlas.surface_class() {
            Ok(class) if class.is_disk() => continue,
            Ok(_) => {}
            Err(e) => {
                t.fail(format!("{name}: {e}"));
                continue;
            }
        }
        match chi_sum_check(atlas) {
            Ok(c) => t.case(c.equal, || format!("{name}: sum {} against χ(M) = {}", c.sum, c.euler_char)),
            Err(e) => t.fail(format!("{name}: {e}")),
        }
    }
    let detail = format!("{} non-disk instances", t.cases);
    t.finish(50, detail)
}

/// Structure of the decomposition on every instance with `χ(M) < 0`.
pub fn decomposition_postconditions(analysed: &[Analysed<'_>]) -> Check {
    let mut t = Tally::new(4, "decomposition post-conditions");
    let mut pieces = 0;
    for a in analysed {
        let name = &a.instance.name;
        let Ok(atlas) = &a.atlas else { continue };
        if a.instance.complex.euler_characteristic() >= 0 {
            continue;
        }
        match build_m_neg(atlas) {
            Ok(report) => {
                pieces += report.pieces.len();
                let mut problems = report.violations.clone();
                problems.extend(verify(atlas, &report));
                t.case(problems.is_empty(), || format!("{name}: {}", problems.join("; ")));
            }
            Err(e) => t.fail(format!("{name}: {e}")),
        }
    }
    let detail = format!("{} instances with χ(M) < 0, {pieces} pieces", t.cases);
    t.finish(1, detail)
}

/// `χ(M) < 0` exactly when some canonical neighbourhood is negative, and
/// every incompressible canonical neighbourhood has `χ(N) ≥ χ(M)`.
pub fn neighbourhood_inequalities(analysed: &[Analysed<'_>]) -> Check {
    let mut t = Tally::new(5, "negative neighbourhood biconditional and χ(M) ≤ χ(N)");
    let mut incompressible = 0;
    for a in analysed {
        let name = &a.instance.name;
        let Ok(atlas) = &a.atlas else { continue };
        let chi = a.instance.complex.euler_characteristic();
        let negative = atlas.canonical.iter().any(|n| !n.is_disk && n.euler_char < 0);
        t.case((chi < 0) == negative, || format!("{name}: χ(M) = {chi} but negative neighbourhood present is {negative}"));
        let s = atlas.refined();
        for n in atlas.canonical.iter().filter(|n| !n.is_disk && n.cells.faces().len() < s.face_count()) {
            match is_incompressible(s, &n.cells) {
                Ok(true) => {
                    incompressible += 1;
                    t.case(chi <= n.euler_char, || format!("{name}: χ(N) = {} below χ(M) = {chi}", n.euler_char));
                }
                Ok(false) => {}
                Err(e) => t.fail(format!("{name}: {e}")),
            }
        }
    }
    let detail = format!("{} cases, {incompressible} incompressible neighbourhoods", t.cases);
    t.finish(1, detail)
}

/// The orientation double cover doubles χ and the `h⁺`-invariant faces.
pub fn double_cover() -> Check {
    let mut t = Tally::new(6, "orientation double cover");
    let bases = [("Klein bottle 3x4", fixtures::klein_grid(3, 4)), ("Klein bottle 4x4", fixtures::klein_grid(4, 4)), ("hemicube", fixtures::hemicube())];
    for (name, s) in bases {
        let p = CellPartition::from_complex(&s);
        let cover = match orientation_double_cover(&p) {
            Ok(c) => c,
            Err(e) => {
                t.fail(format!("{name}: {e}"));
                continue;
            }
        };
        let (down, up) = (p.euler_characteristic(), cover.partition.euler_characteristic());
        t.case(up == 2 * down, || format!("{name}: χ = {up} over χ = {down}"));
        for h in p.automorphisms() {
            match cover.lift(&p, &h) {
                Ok(lifted) => {
                    let below = invariant_cells(&p, &h);
                    let above = invariant_cells(&cover.partition, &lifted);
                    t.case(above.counts()[2] == 2 * below.plus[2] && above.minus[2] == 0, || {
                        format!("{name}: {} invariant faces above {} kept faces", above.counts()[2], below.plus[2])
                    });
                }
                Err(e) => t.fail(format!("{name}: {e}")),
            }
        }
    }
    let detail = format!("{} cases", t.cases);
    t.finish(1, detail)
}

/// Shrinking each boundary circle to a point raises χ by one per circle.
pub fn shrink_identity() -> Check {
    let mut t = Tally::new(7, "χ(N̂) = χ(N) + b");
    let annulus = generate::word_surface(&generate::standard_word(SurfaceKind::orientable(0, 2))).expect("annulus word is valid");
    let surfaces = [("pair of pants", generate::pair_of_pants().0), ("annulus", annulus)];
    for (name, s) in surfaces {
        let p = CellPartition::with_collars(&s);
        let b = s.boundary_count() as i64;
        match shrink_boundary(&p) {
            Ok(closed) => {
                let (before, after) = (s.euler_characteristic(), closed.euler_characteristic());
                t.case(after == before + b && closed.is_closed(), || format!("{name}: {after} after, {before} + {b} expected"));
            }
            Err(e) => t.fail(format!("{name}: {e}")),
        }
    }
    let detail = format!("{} fixtures", t.cases);
    t.finish(2, detail)
}

/// Parses DOT text, prints the parsed graph and parses the print again.
pub fn dot_round_trip(text: &str) -> Result<usize, String> {
    use graphviz_rust::printer::{DotPrinter, PrinterContext};
    let graph = graphviz_rust::parse(text)?;
    let printed = graph.print(&mut PrinterContext::default());
    let again = graphviz_rust::parse(&printed)?;
    if again != graph {
        return Err("the printed graph parses differently".into());
    }
    let nodes = match &graph {
        graphviz_rust::dot_structures::Graph::Graph { stmts, .. } | graphviz_rust::dot_structures::Graph::DiGraph { stmts, .. } => {
            stmts.iter().filter(|s| matches!(s, graphviz_rust::dot_structures::Stmt::Node(_))).count()
        }
    };
    Ok(nodes)
}

/// The genus-two flagship: two negative components, two components of
/// `M_neg`, a clean decomposition and valid DOT output.
pub fn flagship() -> Check {
    let mut t = Tally::new(8, "genus-two flagship");
    let (s, f) = generate::genus_two_flagship();
    let atlas = match Atlas::new(&s, &f) {
        Ok(a) => a,
        Err(e) => {
            t.fail(e.to_string());
            return t.finish(4, "atlas failed".into());
        }
    };
    match negative_components(&atlas) {
        Ok(k) => t.case(k.len() == 2, || format!("{} negative components", k.len())),
        Err(e) => t.fail(e.to_string()),
    }
    match build_m_neg(&atlas) {
        Ok(report) => {
            t.case(report.m_neg_components.len() == 2, || format!("M_neg has {} components", report.m_neg_components.len()));
            let mut problems = report.violations.clone();
            problems.extend(verify(&atlas, &report));
            t.case(problems.is_empty(), || problems.join("; "));
            let expected = report.m_neg_components.len() + report.pieces.len();
            match dot_round_trip(&decomposition_dot(&report)) {
                Ok(nodes) => t.case(nodes == expected, || format!("DOT has {nodes} nodes, {expected} expected")),
                Err(e) => t.fail(format!("DOT: {e}")),
            }
        }
        Err(e) => t.fail(e.to_string()),
    }
    t.finish(4, "2 negative components, 2 components of M_neg".into())
}

/// Runs every check. Checks over the instance corpus share one atlas per
/// instance.
pub fn run_selftest(seed: u64) -> SelftestReport {
    let start = Instant::now();
    let mut checks = vec![hopf_trace(), counting_identity()];
    let corpus = instance_corpus(seed);
    let analysed = analyse(&corpus);
    checks.push(chi_sum(&analysed));
    checks.push(decomposition_postconditions(&analysed));
    checks.push(neighbourhood_inequalities(&analysed));
    checks.extend([double_cover(), shrink_identity(), flagship()]);
    SelftestReport { seed, checks, elapsed: start.elapsed() }
}
