//! The 7x7 catalogue behind the improved strategy.
//!
//! One state per lattice pattern: the pattern on the 5x5 interior, the four
//! corners, and three guards on each side. Every transition moves interior
//! guards by a displacement that depends only on the guard's class mod 5, so
//! the same plan can be copied into every block of a larger congruent grid.
//! Side guards move only inside their side, and a guard crossing between a
//! side and the interior always follows the lattice.
//!
//! [`derive`] searches for side covers that make the system closed under
//! every attack. The result is frozen in `data/catalogue_7x7.json` and
//! [`load`] reads that copy.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{Rim, Side, SIDES};
use crate::error::Error;
use crate::grid::{is_dominating, transition_exists, validate_move_plan, Cell, GridDims, GuardPlacement, MovePlan, Window};
use crate::pattern::LatticePlacement;

pub const VERSION: u32 = 1;

const EMBEDDED: &str = include_str!("../../data/catalogue_7x7.json");

const DIMS: GridDims = GridDims { m: 7, n: 7 };
const INTERIOR: Window = Window {
    row_lo: 1,
    row_hi: 5,
    col_lo: 1,
    col_hi: 5,
};

/// Candidate displacements, tried in this order.
const DISPLACEMENTS: [(i32, i32); 5] = [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogueState {
    pub id: usize,
    pub pattern: LatticePlacement,
    /// Occupied positions `1..=5` on the top, bottom, left and right sides.
    pub sides: [Vec<i32>; 4],
    pub cells: Vec<Cell>,
}

impl CatalogueState {
    pub fn placement(&self) -> GuardPlacement {
        GuardPlacement::new(self.cells.iter().copied(), DIMS).expect("catalogue cells lie on the 7x7 grid")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub from: usize,
    pub attack: Cell,
    pub to: usize,
    pub plan: MovePlan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalogue {
    pub version: u32,
    pub m: u32,
    pub n: u32,
    pub states: Vec<CatalogueState>,
    pub transitions: Vec<Transition>,
}

impl Catalogue {
    pub fn state(&self, pattern: LatticePlacement) -> &CatalogueState {
        &self.states[pattern.index()]
    }

    pub fn transition(&self, from: usize, attack: Cell) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.from == from && t.attack == attack)
    }

    /// One line per state and per transition.
    pub fn to_json(&self) -> String {
        fn line<T: Serialize>(v: &T) -> String {
            serde_json::to_string(v).expect("catalogue types serialise")
        }
        let mut out = String::new();
        out.push_str(&format!(
            "{{\n  \"version\": {},\n  \"m\": {},\n  \"n\": {},\n  \"states\": [\n",
            self.version, self.m, self.n
        ));
        let states: Vec<String> = self.states.iter().map(|s| format!("    {}", line(s))).collect();
        out.push_str(&states.join(",\n"));
        out.push_str("\n  ],\n  \"transitions\": [\n");
        let trans: Vec<String> = self.transitions.iter().map(|t| format!("    {}", line(t))).collect();
        out.push_str(&trans.join(",\n"));
        out.push_str("\n  ]\n}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let cat: Catalogue = serde_json::from_str(text).map_err(|e| Error::Catalogue(e.to_string()))?;
        if cat.version != VERSION {
            return Err(Error::Catalogue(format!("version {} (expected {VERSION})", cat.version)));
        }
        if (cat.m, cat.n) != (DIMS.m, DIMS.n) || cat.states.len() != 10 {
            return Err(Error::Catalogue("expected ten states on the 7x7 grid".into()));
        }
        for (i, s) in cat.states.iter().enumerate() {
            if s.id != i || s.pattern.index() != i {
                return Err(Error::Catalogue(format!("state {i} out of order")));
            }
        }
        Ok(cat)
    }
}

/// The frozen catalogue shipped with the crate.
pub fn load() -> &'static Catalogue {
    static CELL: OnceLock<Catalogue> = OnceLock::new();
    CELL.get_or_init(|| Catalogue::from_json(EMBEDDED).expect("embedded catalogue is valid"))
}

/// Class-wise lattice plan between two patterns, with its side crossings.
#[derive(Debug, Clone)]
struct ClassPlan {
    /// Displacement per residue class `(row mod 5, col mod 5)`.
    disp: BTreeMap<(i32, i32), (i32, i32)>,
    /// Per side: positions where an interior guard steps out.
    exits: [u8; 4],
    /// Per side: positions where a side guard steps in.
    entries: [u8; 4],
}

impl ClassPlan {
    fn displacement(&self, c: Cell) -> (i32, i32) {
        self.disp[&(c.row.rem_euclid(5), c.col.rem_euclid(5))]
    }
}

fn bit(pos: i32) -> u8 {
    1 << pos
}

fn positions(mask: u8) -> impl Iterator<Item = i32> {
    (1..=5).filter(move |&j| mask & bit(j) != 0)
}

/// The plan from `p` to `q` moving the fewest guards (first in enumeration
/// order among those) that keeps exits and entries balanced on every side.
fn class_plan(p: LatticePlacement, q: LatticePlacement) -> Option<ClassPlan> {
    let rim = Rim::new(DIMS);
    let reps: Vec<Cell> = INTERIOR.cells().filter(|&c| p.contains(c)).collect();
    let options: Vec<Vec<(i32, i32)>> = reps
        .iter()
        .map(|r| DISPLACEMENTS.iter().copied().filter(|&(dr, dc)| q.contains(r.offset(dr, dc))).collect())
        .collect();
    let mut best: Option<(usize, ClassPlan)> = None;
    let mut idx = vec![0usize; reps.len()];
    if options.iter().any(|o| o.is_empty()) {
        return None;
    }
    loop {
        let choice: Vec<(i32, i32)> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
        let targets: BTreeSet<(i32, i32)> = reps
            .iter()
            .zip(&choice)
            .map(|(r, &(dr, dc))| ((r.row + dr).rem_euclid(5), (r.col + dc).rem_euclid(5)))
            .collect();
        if targets.len() == reps.len() {
            let disp = reps
                .iter()
                .zip(&choice)
                .map(|(r, &d)| ((r.row.rem_euclid(5), r.col.rem_euclid(5)), d))
                .collect();
            let mut plan = ClassPlan {
                disp,
                exits: [0; 4],
                entries: [0; 4],
            };
            for c in DIMS.cells().filter(|&c| p.contains(c)) {
                let (dr, dc) = plan.displacement(c);
                let t = c.offset(dr, dc);
                match (INTERIOR.contains(c), INTERIOR.contains(t)) {
                    (true, false) => {
                        let (s, j) = rim.locate(t).expect("interior guards step onto a side");
                        plan.exits[s.index()] |= bit(j);
                    }
                    (false, true) => {
                        let (s, j) = rim.locate(c).expect("only side cells touch the interior");
                        plan.entries[s.index()] |= bit(j);
                    }
                    _ => {}
                }
            }
            let balanced = (0..4).all(|s| plan.exits[s].count_ones() == plan.entries[s].count_ones());
            let movers = choice.iter().filter(|&&d| d != (0, 0)).count();
            if balanced && best.as_ref().is_none_or(|(m, _)| movers < *m) {
                best = Some((movers, plan));
            }
        }
        // odometer
        let mut k = reps.len();
        loop {
            if k == 0 {
                return best.map(|(_, p)| p);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Moves of the side guards that stay on the side, as position pairs.
///
/// `from` and `to` are the covers before and after; guards on `entries`
/// leave for the interior and interior guards arrive on `exits`. On a line,
/// a matching with steps of at most one exists iff the sorted one works.
fn side_moves(from: u8, to: u8, exits: u8, entries: u8, attack: Option<i32>) -> Option<Vec<(i32, i32)>> {
    if from & entries != entries || to & exits != exits {
        return None;
    }
    if let Some(a) = attack {
        if from & bit(a) != 0 || to & bit(a) == 0 {
            return None;
        }
    }
    let stay: Vec<i32> = positions(from & !entries).collect();
    let land: Vec<i32> = positions(to & !exits).collect();
    if stay.len() != land.len() || stay.iter().zip(&land).any(|(a, b)| (a - b).abs() > 1) {
        return None;
    }
    Some(stay.into_iter().zip(land).collect())
}

/// The interior cell next to position `j` of `side` on the 7x7 grid.
fn inward(side: Side, j: i32) -> Cell {
    match side {
        Side::Top => Cell::new(1, j),
        Side::Bottom => Cell::new(5, j),
        Side::Left => Cell::new(j, 1),
        Side::Right => Cell::new(j, 5),
    }
}

/// Admissible three-guard covers of one side for pattern `p`.
///
/// The cover must hold the side's lattice cell (its interior neighbour has
/// no other dominator) and must dominate the side when positions 1 and 5 are
/// treated as neighbours, which is what a side looks like between two
/// identical segments of a larger grid.
fn side_domain(p: LatticePlacement, side: Side) -> Vec<u8> {
    let rim = Rim::new(DIMS);
    let lattice: u8 = (1..=5).filter(|&j| p.contains(rim.cell(side, j))).map(bit).sum();
    (0u8..32)
        .map(|m| m << 1)
        .filter(|m| m.count_ones() == 3 && m & lattice == lattice)
        .filter(|&m| {
            (1..=5).all(|j| {
                let prev = if j == 1 { 5 } else { j - 1 };
                let next = if j == 5 { 1 } else { j + 1 };
                m & (bit(j) | bit(prev) | bit(next)) != 0 || p.contains(inward(side, j))
            })
        })
        .collect()
}

/// Everything the search needs, precomputed.
struct Problem {
    patterns: Vec<LatticePlacement>,
    plans: Vec<Vec<Option<ClassPlan>>>,
    domains: Vec<[Vec<u8>; 4]>,
    /// Pairs forced by an interior attack with a single possible successor.
    forced: BTreeSet<(usize, usize)>,
}

impl Problem {
    fn new() -> Self {
        let patterns: Vec<LatticePlacement> = LatticePlacement::all().collect();
        let plans: Vec<Vec<Option<ClassPlan>>> = patterns
            .iter()
            .map(|&p| patterns.iter().map(|&q| class_plan(p, q)).collect())
            .collect();
        let domains = patterns.iter().map(|&p| SIDES.map(|s| side_domain(p, s))).collect();
        let mut forced = BTreeSet::new();
        for (i, &p) in patterns.iter().enumerate() {
            for a in INTERIOR.cells().filter(|&a| !p.contains(a)) {
                let cands: Vec<usize> = (0..10).filter(|&j| plans[i][j].is_some() && patterns[j].contains(a)).collect();
                if let [j] = cands[..] {
                    forced.insert((i, j));
                }
            }
        }
        Problem {
            patterns,
            plans,
            domains,
            forced,
        }
    }

    /// `true` if the move `i -> j` is possible on every side where both
    /// covers are known; `attack` is a side cell that must be filled.
    fn pair_ok(&self, covers: &[[u8; 10]; 4], i: usize, j: usize, attack: Option<(Side, i32)>) -> bool {
        let Some(plan) = &self.plans[i][j] else {
            return false;
        };
        SIDES.iter().all(|&s| {
            let (a, b) = (covers[s.index()][i], covers[s.index()][j]);
            let hit = attack.filter(|(side, _)| *side == s).map(|(_, pos)| pos);
            if a == 0 || b == 0 {
                return hit.is_none_or(|h| (a == 0 || a & bit(h) == 0) && (b == 0 || b & bit(h) != 0));
            }
            side_moves(a, b, plan.exits[s.index()], plan.entries[s.index()], hit).is_some()
        })
    }

    /// Successor for attack `a` on state `i`, first by index.
    fn respond(&self, covers: &[[u8; 10]; 4], i: usize, a: Cell) -> Option<usize> {
        let rim = Rim::new(DIMS);
        match rim.locate(a) {
            Some(hit) => (0..10).find(|&j| {
                let cover = covers[hit.0.index()][j];
                (cover == 0 || cover & bit(hit.1) != 0) && self.pair_ok(covers, i, j, Some(hit))
            }),
            None => (0..10).find(|&j| self.patterns[j].contains(a) && self.pair_ok(covers, i, j, None)),
        }
    }

    fn attacks(&self, covers: &[[u8; 10]; 4], i: usize) -> Vec<Cell> {
        let cells = state_cells(self.patterns[i], &SIDES.map(|s| covers[s.index()][i]));
        DIMS.cells().filter(|c| !cells.contains(c)).collect()
    }

    fn side_complete_ok(&self, covers: &[[u8; 10]; 4], side: Side) -> bool {
        let rim = Rim::new(DIMS);
        (0..10).all(|i| {
            positions(!covers[side.index()][i] & 0b111110)
                .all(|j| self.respond(covers, i, rim.cell(side, j)).is_some())
        })
    }

    fn closed(&self, covers: &[[u8; 10]; 4]) -> bool {
        (0..10).all(|i| self.attacks(covers, i).into_iter().all(|a| self.respond(covers, i, a).is_some()))
    }

    fn search(&self, covers: &mut [[u8; 10]; 4], var: usize, nodes: &mut u64) -> bool {
        *nodes += 1;
        if var == 40 {
            return self.closed(covers);
        }
        let (side, i) = (SIDES[var / 10], var % 10);
        for &value in &self.domains[i][side.index()] {
            covers[side.index()][i] = value;
            let consistent = self.forced.iter().filter(|&&(a, b)| a == i || b == i).all(|&(a, b)| {
                let (x, y) = (covers[side.index()][a], covers[side.index()][b]);
                x == 0 || y == 0 || self.pair_ok(covers, a, b, None)
            });
            if consistent && (i < 9 || self.side_complete_ok(covers, side)) && self.search(covers, var + 1, nodes) {
                return true;
            }
        }
        covers[side.index()][i] = 0;
        false
    }
}

fn state_cells(p: LatticePlacement, covers: &[u8; 4]) -> BTreeSet<Cell> {
    let rim = Rim::new(DIMS);
    let mut cells: BTreeSet<Cell> = INTERIOR.cells().filter(|&c| p.contains(c)).collect();
    cells.extend(DIMS.corners());
    for s in SIDES {
        cells.extend(positions(covers[s.index()]).map(|j| rim.cell(s, j)));
    }
    cells
}

/// Builds the explicit plan for `i -> j`.
fn build_plan(problem: &Problem, covers: &[[u8; 10]; 4], i: usize, j: usize, attack: Cell) -> MovePlan {
    let rim = Rim::new(DIMS);
    let plan = problem.plans[i][j].as_ref().expect("responses use existing plans");
    let p = problem.patterns[i];
    let hit = rim.locate(attack);
    let mut pairs: Vec<(Cell, Cell)> = DIMS.corners().into_iter().map(|c| (c, c)).collect();
    for c in INTERIOR.cells().filter(|&c| p.contains(c)) {
        let (dr, dc) = plan.displacement(c);
        pairs.push((c, c.offset(dr, dc)));
    }
    for s in SIDES {
        let k = s.index();
        for e in positions(plan.entries[k]) {
            let c = rim.cell(s, e);
            let (dr, dc) = plan.displacement(c);
            pairs.push((c, c.offset(dr, dc)));
        }
        let a = hit.filter(|h| h.0 == s).map(|h| h.1);
        let moves = side_moves(covers[k][i], covers[k][j], plan.exits[k], plan.entries[k], a).expect("checked during search");
        pairs.extend(moves.into_iter().map(|(x, y)| (rim.cell(s, x), rim.cell(s, y))));
    }
    MovePlan::new(pairs)
}

/// Searches side covers and responses; deterministic.
pub fn derive() -> Result<Catalogue, Error> {
    let problem = Problem::new();
    let mut covers = [[0u8; 10]; 4];
    let mut nodes = 0;
    if !problem.search(&mut covers, 0, &mut nodes) {
        return Err(Error::NoClosure(format!("no side covers close the system ({nodes} search nodes)")));
    }
    let states: Vec<CatalogueState> = problem
        .patterns
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let sides = SIDES.map(|s| positions(covers[s.index()][i]).collect());
            CatalogueState {
                id: i,
                pattern: p,
                sides,
                cells: state_cells(p, &SIDES.map(|s| covers[s.index()][i])).into_iter().collect(),
            }
        })
        .collect();
    let mut transitions = Vec::new();
    for i in 0..10 {
        for a in problem.attacks(&covers, i) {
            let j = problem
                .respond(&covers, i, a)
                .ok_or_else(|| Error::NoClosure(format!("state {i} attack {a}")))?;
            transitions.push(Transition {
                from: i,
                attack: a,
                to: j,
                plan: build_plan(&problem, &covers, i, j, a),
            });
        }
    }
    Ok(Catalogue {
        version: VERSION,
        m: DIMS.m,
        n: DIMS.n,
        states,
        transitions,
    })
}

/// Result of checking a catalogue from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogueReport {
    pub states: usize,
    pub guards_per_state: Vec<usize>,
    pub all_dominating: bool,
    pub corners_and_sides: bool,
    /// Attacks with a legal in-catalogue response, and attacks in total.
    pub answered: usize,
    pub attacks: usize,
    /// Transitions whose plan keeps corners still and side guards on their side.
    pub local_plans: usize,
    /// Unordered state pairs used by some transition.
    pub edges: BTreeSet<(usize, usize)>,
    pub symmetric: bool,
}

impl CatalogueReport {
    pub fn passed(&self) -> bool {
        self.states == 10
            && self.guards_per_state.iter().all(|&g| g == 21)
            && self.all_dominating
            && self.corners_and_sides
            && self.answered == self.attacks
            && self.local_plans == self.attacks
            && self.symmetric
    }
}

impl fmt::Display for CatalogueReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states)?;
        writeln!(f, "guards per state: {:?}", self.guards_per_state)?;
        writeln!(f, "dominating: {}", self.all_dominating)?;
        writeln!(f, "corners held, three guards per side: {}", self.corners_and_sides)?;
        writeln!(f, "answered attacks: {}/{}", self.answered, self.attacks)?;
        writeln!(f, "plans local to sides: {}/{}", self.local_plans, self.attacks)?;
        writeln!(f, "state pairs linked: {}", self.edges.len())?;
        write!(f, "symmetric: {}", self.symmetric)
    }
}

/// Checks closure with the general legality oracle, independent of how the
/// plans were found.
pub fn verify(cat: &Catalogue) -> CatalogueReport {
    let rim = Rim::new(DIMS);
    let placements: Vec<GuardPlacement> = cat.states.iter().map(CatalogueState::placement).collect();
    let corners = DIMS.corners();
    let corners_and_sides = cat.states.iter().zip(&placements).all(|(s, p)| {
        corners.iter().all(|&c| p.contains(c))
            && SIDES.iter().all(|&side| {
                let on_side: Vec<i32> = (1..=5).filter(|&j| p.contains(rim.cell(side, j))).collect();
                on_side.len() == 3 && on_side == s.sides[side.index()]
            })
    });
    let mut answered = 0;
    let mut attacks = 0;
    let mut local_plans = 0;
    let mut directed = BTreeSet::new();
    for (i, before) in placements.iter().enumerate() {
        for a in DIMS.cells().filter(|&c| !before.contains(c)) {
            attacks += 1;
            let Some(t) = cat.transition(i, a) else { continue };
            let Some(after) = placements.get(t.to) else { continue };
            if validate_move_plan(before, &t.plan, a, after).is_ok() && transition_exists(before, a, after) {
                answered += 1;
                directed.insert((i, t.to));
            }
            let local = t.plan.pairs().iter().all(|&(x, y)| {
                let corner_ok = !corners.contains(&x) || x == y;
                let side_ok = match (rim.locate(x), rim.locate(y)) {
                    (Some((s, _)), Some((u, _))) => s == u,
                    _ => true,
                };
                corner_ok && side_ok
            });
            if local {
                local_plans += 1;
            }
        }
    }
    let symmetric = directed.iter().all(|&(a, b)| directed.contains(&(b, a)));
    CatalogueReport {
        states: cat.states.len(),
        guards_per_state: placements.iter().map(GuardPlacement::len).collect(),
        all_dominating: placements.iter().all(is_dominating),
        corners_and_sides,
        answered,
        attacks,
        local_plans,
        edges: directed.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect(),
        symmetric,
    }
}

/// Placement on a congruent core grid obtained by copying `state` into
/// every block and side segment.
pub fn replicate(state: &CatalogueState, core: GridDims) -> BTreeSet<Cell> {
    let rim = Rim::new(core);
    let local: BTreeSet<Cell> = state.cells.iter().copied().collect();
    core.cells().filter(|&c| local.contains(&rim.local(c))).collect()
}
