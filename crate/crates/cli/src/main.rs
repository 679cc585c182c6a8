//! `eg`: experiments, verifications and the session server.
//!
//! Exit status: 0 when every check passed, 1 on usage or input errors, 2 when
//! a strategy or verification failed.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use eternal_domination::audit::{self, infinite_walk, Attacker, AuditMode, GreedyAttacker, RandomAttacker};
use eternal_domination::checks;
use eternal_domination::finite::{self, catalogue, Sabotage, Variant};
use eternal_domination::grid::{GridDims, Window};
use eternal_domination::pattern::{
    chang_bound, chang_dominating_set, count_restriction, materialize_grid, LatticePlacement, PatternFamily, Residue,
};
use eternal_domination::solver::{self, EliminationOrder, GraphSpec, SmallGraph, SolverOptions};
use eternal_domination::tables;
use eternal_domination::trace::{read_trace, TraceHeader, TraceRecord, TraceWriter};
use eternal_domination::Error;

#[derive(Parser)]
#[command(name = "eg", version, about = "Eternal domination on grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play a finite strategy against an attacker and write a JSONL trace.
    Simulate(SimulateArgs),
    /// Random attacks on the strategy for the infinite grid.
    Infinite {
        #[arg(long, default_value_t = 10_000)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Attacks are drawn from [-spread, spread]^2.
        #[arg(long, default_value_t = 50)]
        spread: i32,
        /// Radius of the verification window around each attack.
        #[arg(long, default_value_t = 10)]
        radius: i32,
    },
    /// Lattice pattern counts and pictures.
    #[command(subcommand)]
    Pattern(PatternCommand),
    /// Exact domination numbers of small grids and paths.
    Solve(SolveArgs),
    /// Check transition tables and lattice placements.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Pattern counting bounds over a range of grids.
    #[command(subcommand)]
    Count(CountCommand),
    /// Derive or show the 7x7 side-segment catalogue.
    #[command(subcommand)]
    Catalogue(CatalogueCommand),
    /// Dominating set of size floor((m+2)(n+2)/5) - 4.
    Chang {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Guard counts of the general strategy against the Chang bound.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Run the session server.
    Serve {
        #[arg(long, default_value_t = eg_service::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(clap::Args)]
struct SimulateArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value = "improved")]
    variant: Variant,
    #[arg(long, value_enum, default_value_t = AttackerKind::Random)]
    attacker: AttackerKind,
    #[arg(long, default_value_t = 1000)]
    rounds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; `EG_TRACE_DIR` takes precedence.
    #[arg(long, default_value = "traces")]
    out: PathBuf,
    /// Break the full-boundary strategy on purpose (negative control).
    #[arg(long, hide = true)]
    sabotage_skip_shift: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackerKind {
    Random,
    Greedy,
    Exhaustive,
}

#[derive(Subcommand)]
enum PatternCommand {
    /// Pattern sizes on an m x n grid for every residue of both families.
    Count {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Draw one lattice placement on an m x n grid.
    Render {
        #[arg(long, default_value = "STRAIGHT")]
        family: PatternFamily,
        #[arg(long, default_value_t = 0)]
        t: u8,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveWhat {
    Gamma,
    GammaInf,
}

#[derive(clap::Args)]
struct SolveArgs {
    what: SolveWhat,
    /// `path:N` or `grid:MxN`.
    #[arg(long)]
    graph: GraphSpec,
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = solver::DEFAULT_CAP)]
    cap: u64,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Recompute the eight transition tables and check them on windows.
    Tables {
        #[arg(long, default_value_t = 10)]
        radius: i32,
    },
    /// Check one step of the strategy for every placement and attack type.
    Steps {
        #[arg(long, default_value_t = 10)]
        radius: i32,
    },
    /// All ten lattice placements dominate, and perfectly so, away from the edge.
    Lattice {
        #[arg(long, default_value_t = 20)]
        size: i32,
        #[arg(long, default_value_t = 2)]
        margin: i32,
    },
}

#[derive(Subcommand)]
enum CountCommand {
    /// Pattern-size bounds floor(mn/5) <= |V(t)| <= ceil(mn/5).
    Bounds {
        #[arg(long, default_value_t = 50)]
        max: u32,
        #[arg(long, default_value_t = 30)]
        enumerate_max: u32,
    },
}

#[derive(Subcommand)]
enum CatalogueCommand {
    /// Derive the 7x7 catalogue from scratch and verify it.
    Derive {
        /// Write the derived catalogue here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the embedded catalogue.
    Show {
        #[arg(long)]
        state: Option<usize>,
    },
}

#[derive(Subcommand)]
enum BoundCommand {
    /// Guards used on arbitrary grids against the Chang bound.
    General {
        #[arg(long, default_value_t = 16)]
        lo: u32,
        #[arg(long, default_value_t = 32)]
        hi: u32,
    },
}

enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) | Error::NoClosure(_) | Error::Internal(_) | Error::ConstructionFailed(_) => {
                Failure::Violation(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn check(ok: bool, what: &str) -> Outcome {
    if ok {
        println!("result: PASS");
        Ok(())
    } else {
        Err(Failure::Violation(format!("{what} failed")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Simulate(args) => simulate(args),
        Command::Infinite { rounds, seed, spread, radius } => {
            let t = Instant::now();
            let r = infinite_walk(seed, rounds, spread, radius);
            println!("rounds: {}", r.rounds);
            println!("violations: {}", r.violations);
            println!("non-alternating steps: {}", r.non_alternating);
            println!("final pattern: {}", r.final_pattern);
            if let Some(f) = &r.first_failure {
                println!("first failure: {f}");
            }
            println!("wall time: {:.3}s", t.elapsed().as_secs_f64());
            check(r.violations == 0 && r.non_alternating == 0 && r.rounds == rounds, "infinite walk")
        }
        Command::Pattern(PatternCommand::Count { m, n }) => {
            println!("grid: {m}x{n}, floor(mn/5) = {}, ceil(mn/5) = {}", m * n / 5, (m * n).div_ceil(5));
            for family in [PatternFamily::Straight, PatternFamily::Transposed] {
                let counts: Vec<String> =
                    Residue::ALL.iter().map(|&t| format!("t={t}: {}", count_restriction(m, n, t, family))).collect();
                println!("{}: {}", family.name(), counts.join(", "));
            }
            Ok(())
        }
        Command::Pattern(PatternCommand::Render { family, t, m, n }) => {
            let dims = GridDims::new(m, n)?;
            let lp = LatticePlacement::new(family, t);
            let p = materialize_grid(lp, dims);
            println!("{lp} on {m}x{n}: {} guards", p.len());
            print!("{}", p.render(&dims.as_window(), None));
            Ok(())
        }
        Command::Solve(args) => solve(args),
        Command::Verify(VerifyCommand::Tables { radius }) => {
            let report = tables::reconcile(radius);
            print!("{report}");
            check(report.passed(), "table verification")
        }
        Command::Verify(VerifyCommand::Steps { radius }) => {
            let sweep = checks::step_sweep(radius);
            let report = tables::reconcile(radius);
            println!("placement/attack cases: {}", sweep.cases);
            println!("failures: {}", sweep.failures.len());
            for f in &sweep.failures {
                println!("  {f}");
            }
            let tables_ok = report.tables.iter().filter(|t| t.windows_ok == 5).count();
            println!("table steps verified for all five residues: {tables_ok}/8");
            check(sweep.failures.is_empty() && tables_ok == 8, "single-step verification")
        }
        Command::Verify(VerifyCommand::Lattice { size, margin }) => {
            let rows = checks::lattice_domination(size, margin);
            for r in &rows {
                println!("{}: dominating {}, perfect {}", r.placement, r.dominating, r.perfect);
            }
            check(rows.iter().all(|r| r.dominating && r.perfect), "lattice domination")
        }
        Command::Count(CountCommand::Bounds { max, enumerate_max }) => {
            let t = Instant::now();
            let r = checks::counting(max, enumerate_max);
            println!("grids: {} (1..={max} squared)", r.grids);
            println!("family/residue cases: {}", r.cases);
            println!("bound failures: {}", r.bound_failures.len());
            println!("grids missing an extreme: {}", r.extreme_failures.len());
            println!("closed form vs enumeration: {} compared, {} differ", r.enumerated, r.enumeration_failures.len());
            for f in r.bound_failures.iter().chain(&r.extreme_failures).chain(&r.enumeration_failures).take(20) {
                println!("  {f:?}");
            }
            println!("wall time: {:.3}s", t.elapsed().as_secs_f64());
            check(r.passed(), "counting")
        }
        Command::Catalogue(CatalogueCommand::Derive { out }) => {
            let t = Instant::now();
            let cat = catalogue::derive()?;
            println!("derived in {:.3}s", t.elapsed().as_secs_f64());
            let report = catalogue::verify(&cat);
            println!("{report}");
            println!("matches embedded copy: {}", &cat == catalogue::load());
            if let Some(path) = out {
                fs::write(&path, cat.to_json())?;
                println!("written: {}", path.display());
            }
            check(report.passed(), "catalogue verification")
        }
        Command::Catalogue(CatalogueCommand::Show { state }) => {
            let cat = catalogue::load();
            let dims = GridDims::new(cat.m, cat.n)?;
            for s in cat.states.iter().filter(|s| state.is_none_or(|k| k == s.id)) {
                println!("state {} ({}), sides top/bottom/left/right {:?}", s.id, s.pattern, s.sides);
                print!("{}", s.placement().render(&dims.as_window(), None));
                let targets: Vec<usize> = {
                    let mut v: Vec<usize> = cat.transitions.iter().filter(|t| t.from == s.id).map(|t| t.to).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                };
                println!("moves to states {targets:?}");
            }
            Ok(())
        }
        Command::Chang { m, n } => {
            let p = chang_dominating_set(m, n)?;
            let dims = GridDims::new(m, n)?;
            println!("size: {} (bound {})", p.len(), chang_bound(m, n));
            print!("{}", p.render(&dims.as_window(), None));
            let dominating = eternal_domination::grid::is_dominating(&p);
            println!("dominating: {dominating}");
            check(dominating && p.len() as u64 == chang_bound(m, n), "chang construction")
        }
        Command::Bound(BoundCommand::General { lo, hi }) => {
            let rows = checks::general_sweep(lo, hi)?;
            println!("m n guards chang excess allowance");
            for r in &rows {
                println!("{} {} {} {} {} {}", r.m, r.n, r.guards, r.chang, r.excess, r.allowance);
            }
            let worst = rows.iter().map(|r| r.excess as f64 / (r.m + r.n) as f64).fold(0.0, f64::max);
            println!("largest excess / (m+n): {worst:.3}");
            check(rows.iter().all(checks::GeneralRow::passed), "general bound")
        }
        Command::Serve { port, host } => {
            let listener = std::net::TcpListener::bind((host.as_str(), port))?;
            println!("listening on {}", listener.local_addr()?);
            eg_service::run(listener, Arc::new(eg_service::Registry::new()))?;
            Ok(())
        }
    }
}

fn trace_dir(default: &Path) -> PathBuf {
    std::env::var_os("EG_TRACE_DIR").map(PathBuf::from).unwrap_or_else(|| default.to_path_buf())
}

fn simulate(args: SimulateArgs) -> Outcome {
    let start = finite::init(args.variant, args.m, args.n)?;
    let sabotage = Sabotage { skip_boundary_shift: args.sabotage_skip_shift };
    let t = Instant::now();
    let dir = trace_dir(&args.out);

    if let AttackerKind::Exhaustive = args.attacker {
        let r = audit::audit_with(args.variant, args.m, args.n, AuditMode::Exhaustive, sabotage)?;
        println!("variant: {}, grid: {}x{}", args.variant, args.m, args.n);
        println!("reachable states: {}", r.states);
        println!("answered (state, attack) pairs: {}", r.edges);
        println!("wall time: {:.3}s", t.elapsed().as_secs_f64());
        return finish_audit(&dir, &format!("{}_{}x{}_exhaustive", args.variant, args.m, args.n), &r);
    }

    let mut attacker: Box<dyn Attacker> = match args.attacker {
        AttackerKind::Random => Box::new(RandomAttacker::new(args.seed)),
        _ => Box::new(GreedyAttacker),
    };
    let stem = match args.attacker {
        AttackerKind::Random => format!("{}_{}x{}_random_{}_{}", args.variant, args.m, args.n, args.seed, args.rounds),
        _ => format!("{}_{}x{}_greedy_{}", args.variant, args.m, args.n, args.rounds),
    };
    fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{stem}.jsonl"));
    let header = TraceHeader::new(&start, attacker.describe());
    let mut writer = TraceWriter::new(BufWriter::new(File::create(&path)?), &header)?;
    let report = audit::play(start, attacker.as_mut(), args.rounds, sabotage, |after, attack, plan| {
        writer
            .record(&TraceRecord::new(after, attack, plan.clone()))
            .map_err(|e| Error::Internal(format!("writing trace: {e}")))
    })?;
    writer.finish()?;

    // every record is re-validated on load
    let (_, records) = read_trace(BufReader::new(File::open(&path)?))?;
    println!("variant: {}, grid: {}x{}, attacker: {}", args.variant, args.m, args.n, report.mode);
    println!("rounds: {}", report.rounds);
    println!("trace: {} ({} records, reloaded and validated)", path.display(), records.len());
    println!("wall time: {:.3}s", t.elapsed().as_secs_f64());
    finish_audit(&dir, &stem, &report)
}

fn finish_audit(dir: &Path, stem: &str, report: &audit::AuditReport) -> Outcome {
    match &report.counterexample {
        None => {
            println!("violations: 0");
            println!("result: PASS");
            Ok(())
        }
        Some(cx) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(format!("{stem}.counterexample.json"));
            let body = serde_json::to_string_pretty(cx).map_err(|e| Failure::Usage(e.to_string()))?;
            fs::write(&path, body)?;
            println!("violations: 1");
            println!("counterexample: {} ({} attacks)", path.display(), cx.attacks.len());
            println!("{}", cx.error);
            Err(Failure::Violation(format!("strategy failed after {} attacks", cx.attacks.len())))
        }
    }
}

fn solve(args: SolveArgs) -> Outcome {
    let g: SmallGraph = args.graph.build()?;
    let kmax = args.kmax.unwrap_or_else(|| solver::default_kmax(g.dims));
    let opts = SolverOptions { cap: args.cap, threads: args.threads, order: EliminationOrder::Rounds };
    let t = Instant::now();
    let window = Window::new(0, g.dims.m as i32 - 1, 0, g.dims.n as i32 - 1)?;
    match args.what {
        SolveWhat::Gamma => {
            let r = solver::gamma(&g, kmax)?;
            println!("graph: {}", g.label());
            println!("method: {:?}", r.method);
            println!("gamma: {}", r.gamma);
            print!("{}", g.placement(r.witness).render(&window, None));
        }
        SolveWhat::GammaInf => {
            let r = solver::gamma_infinity(&g, kmax, &opts)?;
            println!("graph: {}", r.graph);
            println!("gamma: {}", r.gamma);
            for k in &r.per_k {
                println!(
                    "k={}: dominating {}, safe {}, fixpoint rounds {}",
                    k.k, k.dominating_count, k.safe_count, k.iterations
                );
            }
            println!("gamma_infinity: {}", r.gamma_infinity);
            if let Some(w) = r.per_k.last().and_then(|k| k.witness.clone()) {
                let p = eternal_domination::grid::GuardPlacement::new(w, g.dims)?;
                println!("witness:");
                print!("{}", p.render(&window, None));
            }
        }
    }
    println!("wall time: {:.3}s", t.elapsed().as_secs_f64());
    Ok(())
}
