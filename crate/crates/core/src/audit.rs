//! Attackers and the strategy auditor.
//!
//! The random attacker draws from ChaCha8 seeded with a `u64`: the unguarded
//! cells are listed in row-major order and the pick is `next_u64() % len`.
//! The greedy attacker hits the unguarded cell with the fewest guards within
//! distance 2, preferring cells near a corner, then row-major order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::finite::{init, step_with, GameState, Sabotage, Variant};
use crate::grid::{Cell, MovePlan, Window};
use crate::infinite::step_report;
use crate::pattern::{LatticePlacement, PatternFamily};

pub trait Attacker {
    /// Next attack, or `None` when every cell holds a guard.
    fn next_attack(&mut self, state: &GameState) -> Option<Cell>;
    fn describe(&self) -> String;
}

pub fn unguarded(state: &GameState) -> Vec<Cell> {
    state.dims.cells().filter(|&c| !state.placement.contains(c)).collect()
}

pub struct RandomAttacker {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomAttacker {
    pub fn new(seed: u64) -> Self {
        RandomAttacker { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Attacker for RandomAttacker {
    fn next_attack(&mut self, state: &GameState) -> Option<Cell> {
        let free = unguarded(state);
        if free.is_empty() {
            return None;
        }
        Some(free[(self.rng.next_u64() % free.len() as u64) as usize])
    }

    fn describe(&self) -> String {
        format!("random(chacha8, seed={})", self.seed)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyAttacker;

/// The greedy attacker's choice, also served as a hint to human players.
pub fn greedy_attack(state: &GameState) -> Option<Cell> {
    let corners = state.dims.corners();
    unguarded(state).into_iter().min_by_key(|&c| {
        let nearby = (-2..=2)
            .flat_map(|dr: i32| (-2..=2).map(move |dc: i32| (dr, dc)))
            .filter(|(dr, dc)| dr.abs() + dc.abs() <= 2)
            .filter(|&(dr, dc)| state.placement.contains(c.offset(dr, dc)))
            .count();
        let corner = corners.iter().map(|&k| c.distance(k)).min().unwrap_or(0);
        (nearby, corner, c)
    })
}

impl Attacker for GreedyAttacker {
    fn next_attack(&mut self, state: &GameState) -> Option<Cell> {
        greedy_attack(state)
    }

    fn describe(&self) -> String {
        "greedy".into()
    }
}

/// Attack sequence that ends in a failure, with the last good state drawn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub attacks: Vec<Cell>,
    pub state_before: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub variant: Variant,
    pub m: u32,
    pub n: u32,
    pub mode: String,
    pub rounds: u64,
    /// Distinct placements visited (exhaustive mode only).
    pub states: usize,
    /// `(state, attack)` pairs answered (exhaustive mode only).
    pub edges: usize,
    pub counterexample: Option<Counterexample>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditMode {
    Random { seed: u64, rounds: u64 },
    Greedy { rounds: u64 },
    Exhaustive,
}

pub fn audit(variant: Variant, m: u32, n: u32, mode: AuditMode) -> Result<AuditReport, Error> {
    audit_with(variant, m, n, mode, Sabotage::default())
}

pub fn audit_with(variant: Variant, m: u32, n: u32, mode: AuditMode, sabotage: Sabotage) -> Result<AuditReport, Error> {
    let start = init(variant, m, n)?;
    let mut report = AuditReport {
        variant,
        m,
        n,
        mode: String::new(),
        rounds: 0,
        states: 0,
        edges: 0,
        counterexample: None,
    };
    match mode {
        AuditMode::Random { seed, rounds } => {
            let mut a = RandomAttacker::new(seed);
            report.mode = a.describe();
            play_into(&mut report, start, &mut a, rounds, sabotage, |_, _, _| Ok(()))?;
        }
        AuditMode::Greedy { rounds } => {
            report.mode = GreedyAttacker.describe();
            play_into(&mut report, start, &mut GreedyAttacker, rounds, sabotage, |_, _, _| Ok(()))?;
        }
        AuditMode::Exhaustive => {
            report.mode = "exhaustive".into();
            exhaustive(&mut report, start, sabotage);
        }
    }
    Ok(report)
}

/// Plays up to `rounds` rounds, calling `each(after, attack, plan)` after
/// every successful round. Strategy failures end up in the report; errors
/// from `each` are returned.
pub fn play(
    start: GameState,
    attacker: &mut dyn Attacker,
    rounds: u64,
    sabotage: Sabotage,
    each: impl FnMut(&GameState, Cell, &MovePlan) -> Result<(), Error>,
) -> Result<AuditReport, Error> {
    let mut report = AuditReport {
        variant: start.variant,
        m: start.dims.m,
        n: start.dims.n,
        mode: attacker.describe(),
        rounds: 0,
        states: 0,
        edges: 0,
        counterexample: None,
    };
    play_into(&mut report, start, attacker, rounds, sabotage, each)?;
    Ok(report)
}

fn play_into(
    report: &mut AuditReport,
    mut state: GameState,
    attacker: &mut dyn Attacker,
    rounds: u64,
    sabotage: Sabotage,
    mut each: impl FnMut(&GameState, Cell, &MovePlan) -> Result<(), Error>,
) -> Result<(), Error> {
    let mut attacks = Vec::new();
    for _ in 0..rounds {
        let Some(a) = attacker.next_attack(&state) else { break };
        attacks.push(a);
        match step_with(&state, a, sabotage) {
            Ok((next, plan)) => {
                each(&next, a, &plan)?;
                state = next;
                report.rounds += 1;
            }
            Err(e) => {
                report.counterexample = Some(Counterexample {
                    attacks,
                    state_before: state.placement.render(&state.dims.as_window(), Some(a)),
                    error: e.to_string(),
                });
                break;
            }
        }
    }
    Ok(())
}

/// Breadth-first search over every placement reachable under every attack.
fn exhaustive(report: &mut AuditReport, start: GameState, sabotage: Sabotage) {
    let key = |s: &GameState| -> BTreeSet<Cell> { s.placement.cells().clone() };
    // placement -> (state, parent placement, attack that led here)
    let mut seen: BTreeMap<BTreeSet<Cell>, (GameState, Option<(BTreeSet<Cell>, Cell)>)> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(key(&start), (start.clone(), None));
    queue.push_back(key(&start));
    while let Some(k) = queue.pop_front() {
        let state = seen[&k].0.clone();
        for a in unguarded(&state) {
            match step_with(&state, a, sabotage) {
                Ok((next, _)) => {
                    report.edges += 1;
                    let nk = key(&next);
                    if !seen.contains_key(&nk) {
                        seen.insert(nk.clone(), (next, Some((k.clone(), a))));
                        queue.push_back(nk);
                    }
                }
                Err(e) => {
                    let mut attacks = vec![a];
                    let mut cur = k.clone();
                    while let Some((parent, how)) = seen[&cur].1.clone() {
                        attacks.push(how);
                        cur = parent;
                    }
                    attacks.reverse();
                    report.counterexample = Some(Counterexample {
                        attacks,
                        state_before: state.placement.render(&state.dims.as_window(), Some(a)),
                        error: e.to_string(),
                    });
                    report.states = seen.len();
                    return;
                }
            }
        }
    }
    report.states = seen.len();
    report.rounds = report.edges as u64;
}

/// Outcome of [`infinite_walk`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfiniteReport {
    pub seed: u64,
    pub rounds: u64,
    pub violations: u64,
    /// Rounds where the family did not flip.
    pub non_alternating: u64,
    pub first_failure: Option<String>,
    pub final_pattern: LatticePlacement,
}

/// Random attacks on the symbolic infinite strategy. Attacks are drawn
/// uniformly from unguarded cells with both coordinates in `-spread..=spread`
/// (redrawing on guards); each step is expanded and checked on the window
/// of radius `radius` around the attack.
pub fn infinite_walk(seed: u64, rounds: u64, spread: i32, radius: i32) -> InfiniteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = (2 * spread + 1) as u64;
    let mut lp = LatticePlacement::new(PatternFamily::Straight, 0);
    let mut report = InfiniteReport {
        seed,
        rounds: 0,
        violations: 0,
        non_alternating: 0,
        first_failure: None,
        final_pattern: lp,
    };
    for round in 1..=rounds {
        let attack = loop {
            let r = (rng.next_u64() % side) as i32 - spread;
            let c = (rng.next_u64() % side) as i32 - spread;
            let cell = Cell::new(r, c);
            if !lp.contains(cell) {
                break cell;
            }
        };
        report.rounds = round;
        match step_report(lp, attack, Window::around(attack, radius)) {
            Ok(step) => {
                if step.after.family == lp.family {
                    report.non_alternating += 1;
                }
                lp = step.after;
            }
            Err(e) => {
                report.violations += 1;
                report.first_failure.get_or_insert_with(|| format!("round {round}, {lp}, attack {attack}: {e}"));
                break;
            }
        }
    }
    report.final_pattern = lp;
    report
}
