use std::io::Write;
use std::time::{Duration, Instant};

use bigerm::bigerm::BigermInput;
use bigerm::equivalence::decide_equivalence;
use bigerm::normalform::{Source, DEFAULT_CAP};
use bigerm::selftest::{
    determinacy_suite, invariance_suite, oracle_suite, structure_suite, uniqueness_suite, JetOrder, SuiteReport,
};
use bigerm::table::{run_table, TableConfig};
use bigerm::valuesets::intersection_multiplicity;

const SEED: u64 = 2024;
const TABLE_LIMIT: Duration = Duration::from_secs(60);
const WORKED_EXAMPLE_LIMIT: Duration = Duration::from_secs(5);
const INVARIANCE_LIMIT: Duration = Duration::from_secs(600);
const INVARIANCE_GERMS: usize = 20;
const INVARIANCE_ELEMENTS: usize = 20;
const UNIQUENESS_GERMS: usize = 20;
const UNIQUENESS_TRANSLATES: usize = 5;
const ORACLE_GERMS: usize = 20;
const ORACLE_COMBINATIONS: usize = 500;
const STRUCTURE_GERMS: usize = 20;
const DETERMINACY_GERMS: usize = 200;

struct Line {
    criterion: usize,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn report(line: &Line) {
    let status = if line.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {} [{status}] {}: {}", line.criterion, line.name, line.detail);
}

fn suite_detail(r: &SuiteReport, elapsed: Duration) -> String {
    let mut s = format!("{}/{} cases in {:.1}s", r.cases - r.failures.len(), r.cases, elapsed.as_secs_f64());
    for f in r.failures.iter().take(12) {
        s.push_str("\n    ");
        s.push_str(f);
    }
    if r.failures.len() > 12 {
        s.push_str(&format!("\n    ... {} more", r.failures.len() - 12));
    }
    s
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn table_reproduction() -> Line {
    let (reports, elapsed) = timed(|| run_table(&TableConfig::default()));
    let mismatched: Vec<String> = reports.iter().filter(|r| !r.matches()).map(|r| format!("{:?}", r.pair)).collect();
    let families: usize = reports.iter().map(|r| r.expected.len()).sum();
    Line {
        criterion: 1,
        name: "table reproduction",
        passed: mismatched.is_empty() && elapsed < TABLE_LIMIT,
        detail: format!("{} rows, {families} families, mismatched rows {mismatched:?}, {:.1}s (limit {}s)", reports.len(), elapsed.as_secs_f64(), TABLE_LIMIT.as_secs()),
    }
}

fn parallel_pair(a: &str) -> Source {
    let mut input = BigermInput::new(("t^2", "t^5"), ("t^2", &format!("{a}*t^5")));
    input.delta = Some(2);
    Source::Input(input)
}

fn worked_example() -> Line {
    let cases = [("3", "3", true), ("3", "1/3", true), ("3", "5", false)];
    let (outcomes, elapsed) = timed(|| {
        cases
            .iter()
            .map(|(a, b, _)| decide_equivalence(&parallel_pair(a), &parallel_pair(b), DEFAULT_CAP).map(|v| v.equivalent))
            .collect::<Vec<_>>()
    });
    let mut passed = elapsed < WORKED_EXAMPLE_LIMIT;
    let mut parts = Vec::new();
    for ((a, b, want), got) in cases.iter().zip(outcomes) {
        match got {
            Ok(v) => {
                passed &= v == *want;
                parts.push(format!("({a},{b}) -> {}", if v { "equivalent" } else { "not equivalent" }));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("({a},{b}) -> error {e}"));
            }
        }
    }
    Line {
        criterion: 2,
        name: "parallel cusp pair",
        passed,
        detail: format!("{}, {:.2}s (limit {}s)", parts.join(", "), elapsed.as_secs_f64(), WORKED_EXAMPLE_LIMIT.as_secs()),
    }
}

fn invariance() -> Line {
    let (r, elapsed) = timed(|| invariance_suite(SEED, INVARIANCE_GERMS, INVARIANCE_ELEMENTS));
    Line {
        criterion: 3,
        name: "invariance under the group",
        passed: r.passed() && r.cases == INVARIANCE_GERMS && elapsed < INVARIANCE_LIMIT,
        detail: format!("{} germs x {INVARIANCE_ELEMENTS} elements: {}", INVARIANCE_GERMS, suite_detail(&r, elapsed)),
    }
}

fn uniqueness() -> Line {
    let (r, elapsed) = timed(|| uniqueness_suite(SEED, UNIQUENESS_GERMS, UNIQUENESS_TRANSLATES, DEFAULT_CAP));
    Line {
        criterion: 4,
        name: "normal-form uniqueness",
        passed: r.passed() && r.cases == UNIQUENESS_GERMS,
        detail: format!("{UNIQUENESS_GERMS} germs x {UNIQUENESS_TRANSLATES} translates: {}", suite_detail(&r, elapsed)),
    }
}

fn oracle() -> Line {
    let (r, elapsed) = timed(|| oracle_suite(SEED, ORACLE_GERMS, ORACLE_COMBINATIONS));
    Line {
        criterion: 5,
        name: "saturation against random combinations",
        passed: r.passed() && r.cases == ORACLE_GERMS,
        detail: format!("{ORACLE_GERMS} germs x {ORACLE_COMBINATIONS} combinations, window (20,20): {}", suite_detail(&r, elapsed)),
    }
}

fn structure() -> Line {
    let (r, elapsed) = timed(|| structure_suite(SEED, STRUCTURE_GERMS, DEFAULT_CAP));
    let instances = [
        (("t", "0"), ("0", "t"), 1),
        (("t^2", "t^3"), ("t^3", "t^2"), 4),
        (("t", "t^2"), ("t", "t^3"), 2),
    ];
    let mut found = Vec::new();
    let mut exact = true;
    for (b1, b2, want) in instances {
        let forward = BigermInput::new(b1, b2).realize(24).map_err(|e| e.to_string()).and_then(|p| intersection_multiplicity(&p).map_err(|e| e.to_string()));
        let backward = BigermInput::new(b2, b1).realize(24).map_err(|e| e.to_string()).and_then(|p| intersection_multiplicity(&p).map_err(|e| e.to_string()));
        exact &= forward.as_ref() == Ok(&want) && backward.as_ref() == Ok(&want);
        found.push(format!("{forward:?}/{backward:?}"));
    }
    Line {
        criterion: 6,
        name: "structural properties",
        passed: r.passed() && r.cases == STRUCTURE_GERMS && exact,
        detail: format!("intersections {} (want 1, 4, 2); {STRUCTURE_GERMS} germs: {}", found.join(", "), suite_detail(&r, elapsed)),
    }
}

fn determinacy() -> Line {
    let (r, elapsed) = timed(|| determinacy_suite(SEED, DETERMINACY_GERMS, JetOrder::BelowConductor, DEFAULT_CAP));
    let mut detail = format!("jets of order c-1 and c+m1+m2, {DETERMINACY_GERMS} germs: {}", suite_detail(&r, elapsed));
    if !r.passed() {
        let (at_c, t) = timed(|| determinacy_suite(SEED, DETERMINACY_GERMS, JetOrder::Conductor, DEFAULT_CAP));
        detail.push_str(&format!("\n    jets of order c instead: {}", suite_detail(&at_c, t)));
    }
    Line { criterion: 7, name: "finite determinacy", passed: r.passed() && r.cases == DETERMINACY_GERMS, detail }
}

#[test]
fn acceptance() {
    let lines = [table_reproduction(), worked_example(), invariance(), uniqueness(), oracle(), structure(), determinacy()];
    for line in &lines {
        report(line);
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.passed).map(|l| l.criterion).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
