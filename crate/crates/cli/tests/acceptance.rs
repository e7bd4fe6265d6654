//! One pass/fail line per acceptance criterion. Run with
//! `cargo test -p sfol --test acceptance -- --nocapture` to see the table.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use surface_foliation::selftest::{self, dot_round_trip, Check};

struct Line {
    id: u32,
    passed: bool,
    text: String,
}

fn from_check(check: Check, limit: Option<Duration>) -> Line {
    let mut passed = check.passed;
    let mut text = format!("{}: {} ({:.2} s)", check.name, check.detail, check.elapsed.as_secs_f64());
    if let Some(limit) = limit {
        let within = check.elapsed < limit;
        passed &= within;
        text.push_str(&format!(", limit {} s {}", limit.as_secs(), if within { "met" } else { "EXCEEDED" }));
    }
    if let Some(first) = check.violations.first() {
        text.push_str(&format!(", first violation: {first}"));
    }
    Line { id: check.id, passed, text }
}

/// The flagship check plus the binary's exit status and DOT file.
fn flagship_through_the_binary(check: Check) -> Line {
    let mut line = from_check(check, None);
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("flagship.dot");
    let input = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/genus2.json");
    let out = Command::new(env!("CARGO_BIN_EXE_sfol")).arg("decompose").arg(&input).arg("--dot").arg(&dot).output().unwrap();
    let exit = out.status.code();
    let parsed = std::fs::read_to_string(&dot).map_err(|e| e.to_string()).and_then(|t| dot_round_trip(&t));
    line.passed &= exit == Some(0) && parsed.is_ok();
    line.text.push_str(&format!(", sfol decompose exit {exit:?}, DOT {}", match parsed {
        Ok(nodes) => format!("round-trips with {nodes} nodes"),
        Err(e) => format!("rejected: {e}"),
    }));
    line
}

fn selftest_through_the_binary() -> Line {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_sfol")).args(["selftest", "--seed", "0"]).output().unwrap();
    let elapsed = start.elapsed();
    let exit = out.status.code();
    Line {
        id: 9,
        passed: exit == Some(0) && elapsed < Duration::from_secs(60),
        text: format!("sfol selftest exit {exit:?} in {:.2} s, limit 60 s", elapsed.as_secs_f64()),
    }
}

#[test]
fn acceptance() {
    let mut lines = vec![
        from_check(selftest::hopf_trace(), Some(Duration::from_secs(10))),
        from_check(selftest::counting_identity(), Some(Duration::from_secs(30))),
    ];
    let corpus = selftest::instance_corpus(0);
    let analysed = selftest::analyse(&corpus);
    lines.push(from_check(selftest::chi_sum(&analysed), None));
    lines.push(from_check(selftest::decomposition_postconditions(&analysed), None));
    lines.push(from_check(selftest::neighbourhood_inequalities(&analysed), None));
    lines.push(from_check(selftest::double_cover(), None));
    lines.push(from_check(selftest::shrink_identity(), None));
    lines.push(flagship_through_the_binary(selftest::flagship()));
    lines.push(selftest_through_the_binary());

    for line in &lines {
        println!("criterion {}: {} {}", line.id, if line.passed { "PASS" } else { "FAIL" }, line.text);
    }
    let failed: Vec<u32> = lines.iter().filter(|l| !l.passed).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
