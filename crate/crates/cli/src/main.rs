//! `sfol`: command-line driver for the surface-foliation library.
//!
//! Exit codes: 0 success, 1 input error, 2 failed precondition, 3 violated
//! invariant.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use surface_foliation::atlas::{chi_sum_check, Atlas, AtlasError};
use surface_foliation::cellular::{
    check_klh, induced_chain_map, invariant_cells, lefschetz_chain, lefschetz_homology, triviality_theorem,
    CellPartition, CellularError, Verdict,
};
use surface_foliation::decomposition::{build_m_neg, orbit_factorization, verify, DecompositionError};
use surface_foliation::dot::decomposition_dot;
use surface_foliation::fixtures;
use surface_foliation::foliation::{Foliation, Leaf};
use surface_foliation::function::{format_rational, FunctionError};
use surface_foliation::generate::{self, GenerateError, SurfaceKind};
use surface_foliation::io::{parse_automorphism, parse_instance, serialize_instance, Instance, IoError};
use surface_foliation::selftest::run_selftest;
use surface_foliation::SurfaceComplex;

#[derive(Parser)]
#[command(name = "sfol", version, about = "Singular foliations of PL functions on polygonal surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file and report the function's critical data.
    Validate {
        input: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Critical vertices, critical levels and critical components.
    Analyze {
        input: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Atoms and canonical neighbourhoods with the Euler characteristic sum.
    Atoms {
        input: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build M_neg and classify the pieces of its complement.
    Decompose {
        input: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the piece adjacency graph in Graphviz DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Lefschetz numbers and invariant cells of a cellular automorphism.
    Lefschetz {
        input: PathBuf,
        automorphism: PathBuf,
        /// Assume the map is isotopic to the identity and apply the
        /// triviality theorem.
        #[arg(long)]
        assume_isotopic: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the full property suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a generated instance: `genus:G[,boundary:B]`,
    /// `crosscaps:K[,boundary:B]`, `flagship`, `sphere-height`, `torus-height`, `pants`
    /// or `octahedron`.
    Generate {
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Failure {
        Failure { code: 1, message: message.to_string() }
    }

    fn precondition(message: impl ToString) -> Failure {
        Failure { code: 2, message: message.to_string() }
    }

    fn violation(message: impl ToString) -> Failure {
        Failure { code: 3, message: message.to_string() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Failure {
        Failure::input(e)
    }
}

impl From<FunctionError> for Failure {
    fn from(e: FunctionError) -> Failure {
        Failure::input(e)
    }
}

impl From<AtlasError> for Failure {
    fn from(e: AtlasError) -> Failure {
        match e {
            AtlasError::Function(_) | AtlasError::Complex(_) => Failure::input(e),
            AtlasError::SurfaceIsDisk | AtlasError::DiskComponentInN => Failure::precondition(e),
            AtlasError::BandContainsOtherCritical { .. } | AtlasError::Invariant(_) => Failure::violation(e),
        }
    }
}

impl From<CellularError> for Failure {
    fn from(e: CellularError) -> Failure {
        use CellularError::*;
        match e {
            WrongSize { .. } | NotBijective { .. } | EdgeIncidence { .. } | FaceIncidence { .. } | Complex(_) => {
                Failure::input(e)
            }
            NotChainMap { .. } | InconsistentIncidence => Failure::violation(e),
            _ => Failure::precondition(e),
        }
    }
}

impl From<DecompositionError> for Failure {
    fn from(e: DecompositionError) -> Failure {
        match e {
            DecompositionError::ChiNotNegative { .. } => Failure::precondition(e),
            DecompositionError::Atlas(a) => a.into(),
            DecompositionError::Cellular(c) => c.into(),
            _ => Failure::violation(e),
        }
    }
}

impl From<GenerateError> for Failure {
    fn from(e: GenerateError) -> Failure {
        Failure::input(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_json(path: &Option<PathBuf>, value: &Value) -> Result<(), Failure> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        write(path, &text)?;
    }
    Ok(())
}

fn class_json(s: &SurfaceComplex) -> Result<Value, Failure> {
    let class = s.classify().map_err(Failure::input)?;
    Ok(json!({
        "name": class.name(),
        "orientable": class.orientable,
        "genus_or_crosscaps": class.genus_or_crosscaps,
        "boundary_circles": class.boundary_count,
        "euler_char": class.euler_char,
    }))
}

fn validate(input: &Path, json_out: &Option<PathBuf>) -> Result<(), Failure> {
    let inst = load(input)?;
    let s = &inst.complex;
    let foliation = Foliation::new(s, &inst.function)?;
    let class = s.classify().map_err(Failure::input)?;
    println!("valid instance: {} vertices, {} edges, {} faces", s.vertex_count(), s.edge_count(), s.face_count());
    println!("surface: {}, χ = {}", class.name(), class.euler_char);
    println!(
        "function: {}-valued, {} critical vertices on {} special levels",
        if inst.function.is_circle_valued() { "circle" } else { "real" },
        foliation.critical().len(),
        foliation.levels().len()
    );
    write_json(
        json_out,
        &json!({
            "valid": true,
            "cells": [s.vertex_count(), s.edge_count(), s.face_count()],
            "surface": class_json(s)?,
            "target": inst.function.target(),
            "critical_vertices": foliation.critical().len(),
            "levels": foliation.levels().len(),
        }),
    )
}

fn analyze(input: &Path, json_out: &Option<PathBuf>) -> Result<(), Failure> {
    let inst = load(input)?;
    let s = &inst.complex;
    let f = &inst.function;
    let foliation = Foliation::new(s, f)?;
    println!("critical vertices:");
    let mut critical = Vec::new();
    for c in foliation.critical() {
        let value = format_rational(f.value(c.vertex));
        println!("  vertex {}: {} at {value}", s.vertex_label(c.vertex), c.kind);
        critical.push(json!({"vertex": s.vertex_label(c.vertex), "kind": c.kind.to_string(), "value": value}));
    }
    println!("special levels:");
    let mut levels = Vec::new();
    for level in foliation.levels() {
        let value = format_rational(&level.value);
        let labels: Vec<u64> = level.critical.iter().map(|c| s.vertex_label(c.vertex)).collect();
        println!("  {value}: critical {labels:?}, {} boundary circles", level.boundary_circles.len());
        levels.push(json!({"value": value, "critical": labels, "boundary_circles": level.boundary_circles}));
    }
    println!("critical components:");
    let mut components = Vec::new();
    for (k, c) in foliation.components.iter().enumerate() {
        let labels: Vec<u64> = c.critical.iter().map(|v| s.vertex_label(v.vertex)).collect();
        let count = |p: fn(&Leaf) -> bool| c.leaves.iter().filter(|l| p(l)).count();
        let points = count(|l| matches!(l, Leaf::Point(_)));
        let arcs = count(|l| matches!(l, Leaf::Arc { .. }));
        let circles = count(|l| matches!(l, Leaf::Circle { .. }));
        let level = format_rational(&c.level);
        println!("  K{k} at {level}: critical {labels:?}, {points} points, {arcs} arcs, {circles} circles");
        components.push(json!({
            "component": k, "level": level, "critical": labels,
            "points": points, "arcs": arcs, "circles": circles,
        }));
    }
    write_json(json_out, &json!({"critical": critical, "levels": levels, "components": components}))
}

fn atoms(input: &Path, json_out: &Option<PathBuf>) -> Result<(), Failure> {
    let inst = load(input)?;
    let atlas = Atlas::new(&inst.complex, &inst.function)?;
    println!("{:>4}  {:>8}  {:>6}  {:>10}  {:>8}  {:<}", "K", "level", "χ(N)", "χ(N̂)", "disks", "N̂");
    let mut rows = Vec::new();
    for (atom, n) in atlas.atoms.iter().zip(&atlas.canonical) {
        let level = format_rational(&atlas.foliation.components[atom.component].level);
        let atom_chi = atom.cells.euler_characteristic();
        println!(
            "{:>4}  {:>8}  {:>6}  {:>10}  {:>8}  {}",
            format!("K{}", atom.component),
            level,
            atom_chi,
            n.euler_char,
            n.added_disks,
            n.class.name()
        );
        rows.push(json!({
            "component": atom.component, "level": level, "atom_euler_char": atom_chi,
            "atom_boundary_circles": atom.boundary_circles.len(), "canonical_euler_char": n.euler_char,
            "canonical_class": n.class.name(), "is_disk": n.is_disk, "added_disks": n.added_disks,
        }));
    }
    let class = atlas.surface_class()?;
    let chi_sum = if class.is_disk() {
        println!("chi_sum_check: not applicable, M is a disk");
        Value::Null
    } else {
        let check = chi_sum_check(&atlas)?;
        println!(
            "chi_sum_check: Σ χ(N̂(K)) over {:?} = {}, χ(M) = {}: {}",
            check.components,
            check.sum,
            check.euler_char,
            if check.equal { "equal" } else { "NOT EQUAL" }
        );
        if !check.equal {
            return Err(Failure::violation(format!("Σ χ(N̂(K)) = {} but χ(M) = {}", check.sum, check.euler_char)));
        }
        json!({
            "components": check.components, "duplicates": check.duplicates, "sum": check.sum,
            "euler_char": check.euler_char, "equal": check.equal, "complement_cylinders": check.complement_cylinders,
        })
    };
    write_json(json_out, &json!({"atoms": rows, "chi_sum_check": chi_sum}))
}

fn decompose(input: &Path, json_out: &Option<PathBuf>, dot_out: &Option<PathBuf>) -> Result<(), Failure> {
    let inst = load(input)?;
    let chi = inst.complex.euler_characteristic();
    if chi >= 0 {
        return Err(DecompositionError::ChiNotNegative { euler_char: chi }.into());
    }
    let atlas = Atlas::new(&inst.complex, &inst.function)?;
    let report = build_m_neg(&atlas)?;
    let mut violations = report.violations.clone();
    violations.extend(verify(&atlas, &report));
    println!("negative components: {:?}", report.negative_components.iter().map(|k| format!("K{k}")).collect::<Vec<_>>());
    println!("M_neg: {} components", report.m_neg_components.len());
    let mut m_neg = Vec::new();
    for (i, c) in report.m_neg_components.iter().enumerate() {
        let class = c.classify().map_err(Failure::violation)?;
        println!("  M_neg {i}: {}, χ = {}", class.name(), class.euler_char);
        m_neg.push(json!({"class": class.name(), "euler_char": class.euler_char, "faces": c.faces().len()}));
    }
    println!("pieces of the complement: {}", report.pieces.len());
    let s = &inst.complex;
    let mut pieces = Vec::new();
    for (i, p) in report.pieces.iter().enumerate() {
        let critical: Vec<Value> = p
            .critical
            .iter()
            .map(|c| json!({"vertex": s.vertex_label(c.vertex), "kind": c.kind.to_string()}))
            .collect();
        println!("  piece {i}: {}, {} critical vertices, {} circles on ∂M", p.class.name(), p.critical.len(), p.circles_on_boundary);
        pieces.push(json!({
            "class": p.class.name(), "euler_char": p.class.euler_char, "critical": critical,
            "circles_on_boundary": p.circles_on_boundary,
        }));
    }
    let factors = orbit_factorization(&report);
    let dot = decomposition_dot(&report);
    if let Some(path) = dot_out {
        write(path, &dot)?;
    }
    write_json(
        json_out,
        &json!({
            "euler_char": chi,
            "negative_components": report.negative_components,
            "m_neg_components": m_neg,
            "pieces": pieces,
            "pieces_on_boundary": report.pieces_on_boundary(),
            "factors": factors,
            "violations": violations,
        }),
    )?;
    if !violations.is_empty() {
        return Err(Failure::violation(violations.join("; ")));
    }
    println!("violations: none");
    Ok(())
}

fn lefschetz(input: &Path, automorphism: &Path, assume_isotopic: bool, json_out: &Option<PathBuf>) -> Result<(), Failure> {
    let inst = load(input)?;
    let s = &inst.complex;
    let h = parse_automorphism(&read(automorphism)?, s).map_err(|e| Failure::input(format!("{}: {e}", automorphism.display())))?;
    h.validate(s)?;
    let p = CellPartition::from_complex(s);
    let cm = induced_chain_map(&p, &h)?;
    let traces = cm.traces();
    let chain = lefschetz_chain(&cm);
    let homology = lefschetz_homology(&p, &cm)?;
    let invariant = invariant_cells(&p, &h);
    println!("traces on chains: {traces:?}");
    println!("L(h) from chains = {chain}, from homology = {homology}");
    println!("invariant cells: h⁺ {:?}, h⁻ {:?}", invariant.plus, invariant.minus);
    let mut out = json!({
        "traces": traces, "lefschetz_chain": chain, "lefschetz_homology": homology, "invariant": invariant,
        "orientation": h.preserves_orientation(s),
    });
    if chain != homology {
        write_json(json_out, &out)?;
        return Err(Failure::violation(format!("chain Lefschetz number {chain} differs from homology {homology}")));
    }
    let counting = s.is_closed() && h.preserves_orientation(s) == Some(true) && !h.is_delta_trivial();
    if counting {
        let report = check_klh(&p, &h)?;
        println!("counting identity: {} invariant cells, L(h) = {}: {}", report.invariant.total(), report.lefschetz, if report.holds() { "holds" } else { "FAILS" });
        out["klh"] = serde_json::to_value(&report).expect("reports serialize");
        if !report.holds() {
            write_json(json_out, &out)?;
            return Err(Failure::violation("the invariant-cell count differs from L(h)"));
        }
    }
    if assume_isotopic {
        let q = CellPartition::with_collars(s);
        let extended = q.extend_over_collars(&h)?;
        let report = triviality_theorem(&q, &extended, true);
        match report {
            Ok(report) => {
                match &report.verdict {
                    Verdict::DeltaTrivial { certificate } => {
                        println!("triviality theorem: every cell fixed with orientation ({} cells certified)", certificate.cells.len())
                    }
                    Verdict::ExactlyLInvariantCells { count, lefschetz } => {
                        println!("triviality theorem: exactly {count} invariant cells, L(h) = {lefschetz}")
                    }
                }
                for line in &report.assumed {
                    println!("  assumed: {line}");
                }
                for line in &report.verified {
                    println!("  verified: {line}");
                }
                out["theorem"] = serde_json::to_value(&report).expect("reports serialize");
            }
            Err(e) => {
                out["theorem_error"] = json!(e.to_string());
                write_json(json_out, &out)?;
                return Err(e.into());
            }
        }
    }
    write_json(json_out, &out)
}

fn selftest(seed: u64, json_out: &Option<PathBuf>) -> Result<(), Failure> {
    let report = run_selftest(seed);
    for check in &report.checks {
        println!("{}", check.line());
        for v in check.violations.iter().take(5) {
            println!("    {v}");
        }
    }
    println!("selftest finished in {:.2} s", report.elapsed.as_secs_f64());
    write_json(json_out, &serde_json::to_value(&report).expect("reports serialize"))?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::violation("selftest failed"))
    }
}

fn generate(kind: &str, seed: u64, out: &Option<PathBuf>) -> Result<(), Failure> {
    let ((s, f), meta) = match kind {
        "flagship" => (generate::genus_two_flagship(), json!({"kind": "flagship"})),
        "sphere-height" => (generate::sphere_height(), json!({"kind": "sphere-height"})),
        "torus-height" => (generate::torus_height(), json!({"kind": "torus-height"})),
        "pants" => (generate::pair_of_pants(), json!({"kind": "pants"})),
        "octahedron" => {
            let s = fixtures::octahedron();
            let f = generate::random_values(&s, seed);
            ((s, f), json!({"kind": "octahedron", "seed": seed}))
        }
        _ => {
            let k: SurfaceKind = SurfaceKind::parse(kind)?;
            (generate::generate(k, seed)?, json!({"kind": kind, "seed": seed}))
        }
    };
    let text = serialize_instance(&s, &f, &meta);
    match out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { input, json } => validate(&input, &json),
        Command::Analyze { input, json } => analyze(&input, &json),
        Command::Atoms { input, json } => atoms(&input, &json),
        Command::Decompose { input, json, dot } => decompose(&input, &json, &dot),
        Command::Lefschetz { input, automorphism, assume_isotopic, json } => {
            lefschetz(&input, &automorphism, assume_isotopic, &json)
        }
        Command::Selftest { seed, json } => selftest(seed, &json),
        Command::Generate { kind, seed, out } => generate(&kind, seed, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
