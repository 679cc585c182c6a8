//! Acceptance criteria 1 to 11. Each criterion prints one PASS/FAIL line with
//! its measured time against a pinned limit; the test fails if any does.
//!
//! Time limits assume the optimised test profile set in the workspace root.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use eternal_domination::audit::{audit, infinite_walk, AuditMode};
use eternal_domination::checks;
use eternal_domination::finite::{self, catalogue, congruent_dims, full_boundary_budget, improved_budget, Variant};
use eternal_domination::solver::{
    gamma, gamma_infinity, safe_configurations, EliminationOrder, SmallGraph, SolverOptions,
};
use eternal_domination::tables::{self, RowStatus};

mod limits {
    use std::time::Duration;

    pub const LATTICE: Duration = Duration::from_secs(1);
    pub const COUNTING: Duration = Duration::from_secs(5);
    pub const TABLES: Duration = Duration::from_secs(1);
    pub const INFINITE: Duration = Duration::from_secs(30);
    pub const CHANG: Duration = Duration::from_secs(10);
    pub const FULL_BOUNDARY: Duration = Duration::from_secs(120);
    pub const CATALOGUE_DERIVE: Duration = Duration::from_secs(600);
    pub const CATALOGUE_REPLAY: Duration = Duration::from_secs(1);
    pub const IMPROVED: Duration = Duration::from_secs(60);
    pub const SOLVER: Duration = Duration::from_secs(120);
    pub const GENERAL: Duration = Duration::from_secs(10);

    /// Rounds per attacker for the endurance runs.
    pub const ROUNDS: u64 = 10_000;
    /// Largest configuration count used for the order/thread comparison.
    pub const DETERMINISM_CONFIGS: u64 = 10_000;
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn run(n: u8, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let took = t.elapsed();
    let ok = o.ok && took <= limit;
    println!(
        "[{}] criterion {n:>2}: {title}: {} ({:.2}s, limit {}s)",
        if ok { "PASS" } else { "FAIL" },
        o.detail,
        took.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn c1_lattice() -> Outcome {
    let rows = checks::lattice_domination(20, 2);
    let good = rows.iter().filter(|r| r.dominating && r.perfect).count();
    outcome(rows.len() == 10 && good == 10, format!("{good}/10 placements dominate perfectly on the 20x20 inner region"))
}

fn c2_counting() -> Outcome {
    let r = checks::counting(50, 30);
    outcome(
        r.passed() && r.grids == 2500 && r.enumerated == 900 * 10,
        format!(
            "{} grids, {} cases; bound/extreme/enumeration failures {}/{}/{}",
            r.grids,
            r.cases,
            r.bound_failures.len(),
            r.extreme_failures.len(),
            r.enumeration_failures.len()
        ),
    )
}

fn c3_tables() -> Outcome {
    let report = tables::reconcile(10);
    let windows: usize = report.tables.iter().map(|t| t.windows_ok).sum();
    let flagged: Vec<(u8, RowStatus)> = report.flagged().map(|(t, r)| (t, r.status)).collect();
    // Counting tables in print order, the "x + y + 1" entry is in the 7th.
    let expected = vec![(7, RowStatus::Typo), (8, RowStatus::Formatting)];
    outcome(
        report.passed() && windows == 40 && flagged == expected,
        format!("{windows}/40 table steps verified on 21x21 windows; reconciled {flagged:?}"),
    )
}

fn c4_infinite() -> Outcome {
    let r = infinite_walk(2024, limits::ROUNDS, 50, 10);
    outcome(
        r.rounds == limits::ROUNDS && r.violations == 0 && r.non_alternating == 0,
        format!("{} attacks, {} violations, {} steps without a family flip", r.rounds, r.violations, r.non_alternating),
    )
}

fn c5_chang() -> Outcome {
    let rows = checks::chang_sweep(8, 20);
    let good = rows.iter().filter(|r| r.passed()).count();
    outcome(good == rows.len() && rows.len() == 169, format!("{good}/{} grids dominated at the exact size", rows.len()))
}

fn c6_full_boundary() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (m, n) in [(7, 7), (7, 12), (12, 12), (17, 22)] {
        let s = finite::init(Variant::FullBoundary, m, n).unwrap();
        let guards = s.placement.len() as u64;
        let exact = 5 * guards == (m * n + 8 * (m + n) - 16) as u64 && guards == full_boundary_budget(m, n);
        let random = audit(Variant::FullBoundary, m, n, AuditMode::Random { seed: 42, rounds: limits::ROUNDS }).unwrap();
        let greedy = audit(Variant::FullBoundary, m, n, AuditMode::Greedy { rounds: limits::ROUNDS }).unwrap();
        let played = random.rounds == limits::ROUNDS && greedy.rounds == limits::ROUNDS;
        ok &= exact && random.passed() && greedy.passed() && played;
        details.push(format!("{m}x{n}: {guards} guards"));
    }
    outcome(ok, format!("{}; 10^4 random + 10^4 greedy each, no violations", details.join(", ")))
}

fn c7_catalogue() -> (Outcome, Duration) {
    let t = Instant::now();
    let derived = catalogue::derive();
    let derive_time = t.elapsed();
    let Ok(derived) = derived else {
        return (outcome(false, "derivation failed"), derive_time);
    };
    let report = catalogue::verify(&derived);
    let same = &derived == catalogue::load();
    (
        outcome(
            report.passed() && same,
            format!(
                "{} states x {} guards, {}/{} attacks answered, symmetric {}, matches frozen copy {same}, derived in {:.2}s",
                report.states,
                report.guards_per_state.iter().max().copied().unwrap_or(0),
                report.answered,
                report.attacks,
                report.symmetric,
                derive_time.as_secs_f64()
            ),
        ),
        derive_time,
    )
}

fn c7_replay() -> Outcome {
    let report = catalogue::verify(catalogue::load());
    outcome(report.passed(), format!("embedded catalogue re-verified, {}/{} attacks", report.answered, report.attacks))
}

fn c8_improved() -> Outcome {
    let sizes: Vec<u32> = (7..=52).filter(|v| v % 5 == 2).collect();
    let mut checked = 0;
    let mut ok = true;
    for &m in &sizes {
        for &n in &sizes {
            assert!(congruent_dims(m, n));
            let s = finite::init(Variant::Improved, m, n).unwrap();
            let k = s.placement.len() as u64;
            ok &= 5 * k == (m * n + 4 * (m + n)) as u64 && k == improved_budget(m, n);
            checked += 1;
        }
    }
    let r = audit(Variant::Improved, 12, 12, AuditMode::Exhaustive).unwrap();
    ok &= r.passed() && r.states == 10 && r.edges == 10 * (144 - 48);
    outcome(
        ok,
        format!("budget identity on {checked} grids; 12x12 closure: {} states, {} answered attacks", r.states, r.edges),
    )
}

fn c9_solver() -> Outcome {
    let opts = SolverOptions::default();
    let p5 = SmallGraph::path(5).unwrap();
    let p2 = SmallGraph::path(2).unwrap();
    let g33 = SmallGraph::grid(3, 3).unwrap();
    let p5_inf = gamma_infinity(&p5, 10, &opts).unwrap();
    let p5_k2 = safe_configurations(&p5, 2, &opts).unwrap().safe.len();
    let p2_inf = gamma_infinity(&p2, 10, &opts).unwrap();
    let g33_inf = gamma_infinity(&g33, 9, &opts).unwrap();
    // frozen from the fixpoint run, cross-checked by an independent brute force
    const GAMMA_INF_3X3: u32 = 3;

    let mut solved = 0;
    let mut dominance = true;
    for (m, n) in [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 3), (3, 4), (3, 5), (4, 4)] {
        let g = SmallGraph::grid(m, n).unwrap();
        let r = gamma_infinity(&g, 16, &opts).unwrap();
        dominance &= r.gamma_infinity >= r.gamma && r.gamma == gamma(&g, 16).unwrap().gamma;
        solved += 1;
    }

    let mut compared = 0;
    let mut identical = true;
    for (m, n, k) in [(1, 5, 2), (1, 5, 3), (1, 7, 3), (3, 3, 3), (3, 3, 4), (2, 5, 4), (3, 4, 4), (2, 6, 4), (3, 5, 5), (4, 4, 6)] {
        let g = SmallGraph::grid(m, n).unwrap();
        let base = safe_configurations(&g, k, &opts).unwrap();
        if base.dominating_count > limits::DETERMINISM_CONFIGS {
            continue;
        }
        compared += 1;
        for order in [EliminationOrder::Forward, EliminationOrder::Reverse] {
            identical &= safe_configurations(&g, k, &SolverOptions { order, ..opts }).unwrap().safe == base.safe;
        }
        for threads in [1, 2, 8] {
            identical &= safe_configurations(&g, k, &SolverOptions { threads: Some(threads), ..opts }).unwrap() == base;
        }
    }

    let ok = p5_inf.gamma_infinity == 3
        && p5_k2 == 0
        && p2_inf.gamma_infinity == 1
        && g33_inf.gamma_infinity == GAMMA_INF_3X3
        && dominance
        && identical
        && compared >= 8;
    outcome(
        ok,
        format!(
            "P_5 -> {}, safe(P_5, 2) = {p5_k2}, P_2 -> {}, 3x3 -> {}; gamma_inf >= gamma on {solved} graphs; {compared} instances identical across 3 orders and 1/2/8 threads",
            p5_inf.gamma_infinity, p2_inf.gamma_infinity, g33_inf.gamma_infinity
        ),
    )
}

fn c10_general() -> Outcome {
    let rows = checks::general_sweep(16, 32).unwrap();
    let good = rows.iter().filter(|r| r.passed()).count();
    let worst = rows.iter().map(|r| r.excess as f64 / (r.m + r.n) as f64).fold(0.0, f64::max);
    outcome(
        good == rows.len() && rows.len() == 17 * 17,
        format!("{good}/{} grids within 6(m+n) of the Chang bound; worst excess {worst:.3}(m+n)", rows.len()),
    )
}

fn c11_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_eg");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let args = ["simulate", "--m", "12", "--n", "12", "--variant", "improved", "--attacker", "random", "--rounds", "2000", "--seed", "7"];
    let mut traces = Vec::new();
    for d in &dirs {
        let status = Command::new(exe).args(args).env("EG_TRACE_DIR", d.path()).output().unwrap();
        if !status.status.success() {
            return outcome(false, format!("simulate exited with {:?}", status.status.code()));
        }
        traces.push(fs::read(d.path().join("improved_12x12_random_7_2000.jsonl")).unwrap());
    }
    let lines = traces[0].iter().filter(|&&b| b == b'\n').count();
    outcome(
        traces[0] == traces[1] && lines == 2001,
        format!("two runs of `eg {}` wrote byte-identical traces ({lines} lines)", args.join(" ")),
    )
}

#[test]
fn acceptance() {
    let mut results = vec![
        run(1, "lattice placements dominate", limits::LATTICE, c1_lattice),
        run(2, "pattern counting bounds", limits::COUNTING, c2_counting),
        run(3, "transition tables", limits::TABLES, c3_tables),
        run(4, "infinite strategy endurance", limits::INFINITE, c4_infinite),
        run(5, "Chang construction", limits::CHANG, c5_chang),
        run(6, "full-boundary budget and endurance", limits::FULL_BOUNDARY, c6_full_boundary),
    ];
    let mut derive_time = Duration::ZERO;
    results.push(run(7, "improved catalogue closure", limits::CATALOGUE_DERIVE, || {
        let (o, t) = c7_catalogue();
        derive_time = t;
        o
    }));
    results.push(run(7, "catalogue replay", limits::CATALOGUE_REPLAY, c7_replay));
    results.push(run(8, "improved budget and 12x12 closure", limits::IMPROVED, c8_improved));
    results.push(run(9, "solver ground truth", limits::SOLVER, c9_solver));
    results.push(run(10, "general grids against the Chang bound", limits::GENERAL, c10_general));
    results.push(run(11, "trace determinism", Duration::from_secs(60), c11_determinism));
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} checks passed (catalogue derivation {:.2}s)", results.len(), derive_time.as_secs_f64());
    assert_eq!(passed, results.len());
}
