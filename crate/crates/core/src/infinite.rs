//! Guard strategies on the infinite grid, kept symbolic.
//!
//! A placement is a [`LatticePlacement`]; a step is described by the moves
//! of the five guards in one period of the pattern, and every other guard
//! copies the move of its translate under `5Z x 5Z`. Windows are only
//! materialised to check a step.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grid::{validate_move_plan, Bound, Cell, GuardPlacement, MovePlan, PlanViolation, Window};
use crate::pattern::{f_value, materialize, LatticePlacement, PatternFamily};

/// Unit direction of a guard move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::Up => (-1, 0),
            Direction::Down => (1, 0),
            Direction::Left => (0, -1),
            Direction::Right => (0, 1),
        }
    }

    pub fn from_delta(d: (i32, i32)) -> Option<Self> {
        match d {
            (-1, 0) => Some(Direction::Up),
            (1, 0) => Some(Direction::Down),
            (0, -1) => Some(Direction::Left),
            (0, 1) => Some(Direction::Right),
            _ => None,
        }
    }
}

/// A 2x2 block of unguarded cells next to a guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmptySquare {
    /// Top-left cell.
    pub anchor: Cell,
    pub index: u8,
    /// Squares of the transposed family.
    pub primed: bool,
}

impl EmptySquare {
    pub fn cells(&self) -> [Cell; 4] {
        let a = self.anchor;
        [a, a.offset(0, 1), a.offset(1, 0), a.offset(1, 1)]
    }

    pub fn contains(&self, c: Cell) -> bool {
        (0..=1).contains(&(c.row - self.anchor.row)) && (0..=1).contains(&(c.col - self.anchor.col))
    }
}

impl fmt::Display for EmptySquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.primed { "'" } else { "" };
        write!(f, "SQ{prime}_{}@{}", self.index, self.anchor)
    }
}

/// Anchor offsets of the four squares around a guard, by index.
const STRAIGHT_SQUARES: [(i32, i32); 4] = [(-1, 1), (1, 0), (0, -2), (-2, -1)];
// The third transposed square is the 2x2 block at rows -1..0, cols -2..-1.
const TRANSPOSED_SQUARES: [(i32, i32); 4] = [(0, 1), (1, -1), (-1, -2), (-2, 0)];

/// The four empty squares around `guard` for a placement of `family`
/// containing `guard`.
pub fn empty_squares(family: PatternFamily, guard: Cell) -> Result<[EmptySquare; 4], Error> {
    let (offsets, primed) = match family {
        PatternFamily::Straight => (STRAIGHT_SQUARES, false),
        PatternFamily::Transposed => (TRANSPOSED_SQUARES, true),
    };
    let t = f_value(guard, family);
    let mut out = [EmptySquare {
        anchor: guard,
        index: 0,
        primed,
    }; 4];
    for (i, (dr, dc)) in offsets.into_iter().enumerate() {
        let sq = EmptySquare {
            anchor: guard.offset(dr, dc),
            index: i as u8,
            primed,
        };
        if let Some(c) = sq.cells().into_iter().find(|&c| f_value(c, family) == t) {
            return Err(Error::Internal(format!("{sq} contains guarded cell {c}")));
        }
        out[i] = sq;
    }
    Ok(out)
}

/// The unique guard of `lp` in `N[attack]`.
pub fn responsible_guard(lp: LatticePlacement, attack: Cell) -> Result<Cell, Error> {
    if lp.contains(attack) {
        return Err(Error::AttackOnGuard(attack));
    }
    let mut found = attack.closed_neighbors().into_iter().filter(|&c| lp.contains(c));
    let g = found
        .next()
        .ok_or_else(|| Error::Internal(format!("{attack} undominated by {lp}")))?;
    assert!(found.next().is_none(), "{lp} is not perfect at {attack}");
    Ok(g)
}

/// Every guard steps in the direction the responsible guard had to take.
pub fn shift_step(lp: LatticePlacement, attack: Cell) -> Result<(LatticePlacement, Direction), Error> {
    let g = responsible_guard(lp, attack)?;
    let d = Direction::from_delta((attack.row - g.row, attack.col - g.col))
        .ok_or_else(|| Error::Internal(format!("guard {g} not adjacent to {attack}")))?;
    let next = LatticePlacement {
        family: lp.family,
        t: f_value(attack, lp.family),
    };
    Ok((next, d))
}

/// Orientation of the four-guard rotation around the pattern square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rotation {
    Clockwise,
    CounterClockwise,
}

/// One Rotate-Square step described on a single period of the pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicStep {
    pub before: LatticePlacement,
    /// The guard that moves onto the attacked cell.
    pub guard: Cell,
    /// Attacked cell relative to `guard`.
    pub attack_offset: Cell,
    pub after: LatticePlacement,
    pub attack_square: EmptySquare,
    pub pattern_square: EmptySquare,
    pub rotation: Rotation,
    /// The four rotating guards then the still model guard, relative to `guard`.
    pub local_moves: MovePlan,
}

impl SymbolicStep {
    pub fn attack(&self) -> Cell {
        self.guard.offset(self.attack_offset.row, self.attack_offset.col)
    }

    /// Displacement of the guard on `c` when the step is repeated in every
    /// period. Cells outside `before` are not guards and get `None`.
    pub fn displacement(&self, c: Cell) -> Option<(i32, i32)> {
        if !self.before.contains(c) {
            return None;
        }
        let rel = (c.row - self.guard.row, c.col - self.guard.col);
        Some(
            self.local_moves
                .pairs()
                .iter()
                .find(|(from, _)| (rel.0 - from.row).rem_euclid(5) == 0 && (rel.1 - from.col).rem_euclid(5) == 0)
                .map(|(from, to)| (to.row - from.row, to.col - from.col))
                .unwrap_or((0, 0)),
        )
    }
}

/// Rotated unit vector: clockwise on screen (rows grow downwards).
fn clockwise((dr, dc): (i32, i32)) -> (i32, i32) {
    (dc, -dr)
}

fn counter_clockwise((dr, dc): (i32, i32)) -> (i32, i32) {
    (-dc, dr)
}

/// Builds the Rotate-Square answer to `attack`.
///
/// The attacked cell lies in one empty square `SQ_i` of its responsible
/// guard; the guard slides along `SQ_(i+1)` (straight) or `SQ_(i-1)`
/// (transposed), and the other three guards around that square take the
/// same rotational step. The new residue is read off the responsible
/// guard's new cell.
pub fn rotate_square_step(lp: LatticePlacement, attack: Cell) -> Result<SymbolicStep, Error> {
    let g = responsible_guard(lp, attack)?;
    let squares = empty_squares(lp.family, g)?;
    let attack_square = *squares
        .iter()
        .find(|sq| sq.contains(attack))
        .ok_or_else(|| Error::Internal(format!("{attack} is in no empty square of {g}")))?;
    let j = match lp.family {
        PatternFamily::Straight => (attack_square.index + 1) % 4,
        PatternFamily::Transposed => (attack_square.index + 3) % 4,
    };
    let pattern_square = squares[j as usize];

    // The four guards around the square, each with its outward direction.
    let mut pinwheel = Vec::with_capacity(4);
    for s in pattern_square.cells() {
        let dom = responsible_guard(lp, s)?;
        pinwheel.push((dom, (dom.row - s.row, dom.col - s.col)));
    }
    let (_, g_out) = *pinwheel
        .iter()
        .find(|(c, _)| *c == g)
        .ok_or_else(|| Error::Internal(format!("{g} does not guard {pattern_square}")))?;
    let g_move = (attack.row - g.row, attack.col - g.col);
    let rotation = if clockwise(g_out) == g_move {
        Rotation::Clockwise
    } else if counter_clockwise(g_out) == g_move {
        Rotation::CounterClockwise
    } else {
        return Err(Error::Internal(format!("{g} -> {attack} does not slide along {pattern_square}")));
    };

    let after = LatticePlacement {
        family: lp.family.flipped(),
        t: f_value(attack, lp.family.flipped()),
    };
    let rel = |c: Cell| Cell::new(c.row - g.row, c.col - g.col);
    let mut pairs: Vec<(Cell, Cell)> = pinwheel
        .iter()
        .map(|&(c, out)| {
            let (dr, dc) = match rotation {
                Rotation::Clockwise => clockwise(out),
                Rotation::CounterClockwise => counter_clockwise(out),
            };
            (rel(c), rel(c.offset(dr, dc)))
        })
        .collect();
    // The fifth class of the period stays; pick its member in the 5x5 box
    // centred on the responsible guard.
    let movers: Vec<Cell> = pairs.iter().map(|p| p.0).collect();
    let still = Window::around(Cell::new(0, 0), 2)
        .cells()
        .find(|&c| {
            lp.contains(g.offset(c.row, c.col))
                && !movers
                    .iter()
                    .any(|m| (m.row - c.row).rem_euclid(5) == 0 && (m.col - c.col).rem_euclid(5) == 0)
        })
        .ok_or_else(|| Error::Internal("no still class in the period".into()))?;
    pairs.push((still, still));

    for &(_, to) in &pairs {
        if !after.contains(g.offset(to.row, to.col)) {
            return Err(Error::Internal(format!("rotation lands {to} outside {after}")));
        }
    }
    Ok(SymbolicStep {
        before: lp,
        guard: g,
        attack_offset: rel(attack),
        after,
        attack_square,
        pattern_square,
        rotation,
        local_moves: MovePlan::new(pairs),
    })
}

/// The step repeated over every guard of `before` inside `w`. Targets may
/// leave `w` by one cell.
pub fn expand_step(step: &SymbolicStep, w: Window) -> MovePlan {
    let mut table = [[(0i32, 0i32); 5]; 5];
    for (from, to) in step.local_moves.pairs() {
        table[from.row.rem_euclid(5) as usize][from.col.rem_euclid(5) as usize] = (to.row - from.row, to.col - from.col);
    }
    let g = step.guard;
    let pairs = w
        .cells()
        .filter(|&c| step.before.contains(c))
        .map(|c| {
            let (dr, dc) = table[(c.row - g.row).rem_euclid(5) as usize][(c.col - g.col).rem_euclid(5) as usize];
            (c, c.offset(dr, dc))
        })
        .collect();
    MovePlan::new(pairs)
}

/// Why a materialised step failed to check out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepFailure {
    WindowTooSmall,
    Illegal(PlanViolation),
    WrongPlacement { expected: usize, found: usize },
    NotDominating(Cell),
    Symbolic(Error),
}

impl fmt::Display for StepFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepFailure::WindowTooSmall => write!(f, "window margin around the attack is below 4"),
            StepFailure::Illegal(v) => write!(f, "{v}"),
            StepFailure::WrongPlacement { expected, found } => {
                write!(f, "placement differs from the lattice: {found} guards in window, {expected} expected")
            }
            StepFailure::NotDominating(c) => write!(f, "{c} undominated after the step"),
            StepFailure::Symbolic(e) => write!(f, "{e}"),
        }
    }
}

/// Minimum margin between the attack and the window edge for checking.
pub const VERIFY_MARGIN: i32 = 4;

/// Checks `plan` (the expansion of `step` over `w` grown by one) on `w`:
/// the plan is a legal answer to the attack, the guards inside `w` form
/// exactly the successor lattice, and the shrunken window is dominated.
pub fn check_expanded_plan(step: &SymbolicStep, plan: &MovePlan, w: Window) -> Result<(), StepFailure> {
    let attack = step.attack();
    if !w.shrink(VERIFY_MARGIN).contains(attack) {
        return Err(StepFailure::WindowTooSmall);
    }
    let source = w.grow(1);
    let before = materialize(step.before, source);
    let after = GuardPlacement::new(plan.targets(), Bound::Window(source.grow(1)))
        .map_err(|_| StepFailure::Illegal(PlanViolation::NotBijective))?;
    validate_move_plan(&before, plan, attack, &after).map_err(StepFailure::Illegal)?;

    let expected = materialize(step.after, w);
    let found: Vec<Cell> = after.cells().iter().copied().filter(|&c| w.contains(c)).collect();
    if found.len() != expected.len() || found.iter().any(|c| !expected.contains(*c)) {
        return Err(StepFailure::WrongPlacement {
            expected: expected.len(),
            found: found.len(),
        });
    }
    if let Some(c) = w.shrink(2).cells().find(|&c| !after.dominates(c)) {
        return Err(StepFailure::NotDominating(c));
    }
    Ok(())
}

/// Materialises the Rotate-Square answer to `attack` on `w` and checks it.
pub fn step_report(lp: LatticePlacement, attack: Cell, w: Window) -> Result<SymbolicStep, StepFailure> {
    let step = rotate_square_step(lp, attack).map_err(StepFailure::Symbolic)?;
    let plan = expand_step(&step, w.grow(1));
    check_expanded_plan(&step, &plan, w)?;
    Ok(step)
}

pub fn verify_step_in_window(lp: LatticePlacement, attack: Cell, w: Window) -> bool {
    step_report(lp, attack, w).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Residue;

    const S: PatternFamily = PatternFamily::Straight;
    const T: PatternFamily = PatternFamily::Transposed;

    fn lp(family: PatternFamily, t: u8) -> LatticePlacement {
        LatticePlacement::new(family, t)
    }

    /// Brute-force oracle: locate the guard next to `attack` by scanning a
    /// materialised 7x7 window.
    fn window_oracle(l: LatticePlacement, attack: Cell) -> Cell {
        let p = materialize(l, Window::around(attack, 3));
        let adj: Vec<Cell> = p.cells().iter().copied().filter(|c| c.distance(attack) == 1).collect();
        assert_eq!(adj.len(), 1);
        adj[0]
    }

    #[test]
    fn shift_examples() {
        let (next, d) = shift_step(lp(S, 0), Cell::new(-1, 0)).unwrap();
        assert_eq!((next, d), (lp(S, 4), Direction::Up));
        // frozen from the window oracle: guard (0,0) in both cases
        assert_eq!(window_oracle(lp(S, 0), Cell::new(0, 1)), Cell::new(0, 0));
        assert_eq!(shift_step(lp(S, 0), Cell::new(0, 1)).unwrap(), (lp(S, 2), Direction::Right));
        assert_eq!(window_oracle(lp(S, 0), Cell::new(0, -1)), Cell::new(0, 0));
        assert_eq!(shift_step(lp(S, 0), Cell::new(0, -1)).unwrap(), (lp(S, 3), Direction::Left));
        assert_eq!(shift_step(lp(S, 0), Cell::new(0, 0)).unwrap_err().code(), "ATTACK_ON_GUARD");
    }

    #[test]
    fn shift_is_a_translation() {
        for l in LatticePlacement::all().filter(|l| l.family == S) {
            for attack in Window::around(Cell::new(0, 0), 3).cells().filter(|&c| !l.contains(c)) {
                let (next, d) = shift_step(l, attack).unwrap();
                let (dr, dc) = d.delta();
                for c in Window::around(Cell::new(0, 0), 4).cells().filter(|&c| l.contains(c)) {
                    assert!(next.contains(c.offset(dr, dc)));
                }
            }
        }
    }

    #[test]
    fn squares_examples() {
        let sq = empty_squares(S, Cell::new(0, 0)).unwrap();
        assert_eq!(
            sq[1].cells(),
            [Cell::new(1, 0), Cell::new(1, 1), Cell::new(2, 0), Cell::new(2, 1)]
        );
        let sq = empty_squares(T, Cell::new(0, 0)).unwrap();
        assert_eq!(
            sq[0].cells(),
            [Cell::new(0, 1), Cell::new(0, 2), Cell::new(1, 1), Cell::new(1, 2)]
        );
        assert_eq!(
            sq[2].cells(),
            [Cell::new(-1, -2), Cell::new(-1, -1), Cell::new(0, -2), Cell::new(0, -1)]
        );
    }

    #[test]
    fn transposed_third_square_is_the_only_empty_block_left_of_guard() {
        // every 2x2 block whose right column is y-1 or y-2 and which touches row x
        let g = Cell::new(0, 0);
        let empty: Vec<Cell> = [(-1, -2), (0, -2), (-1, -3), (0, -3)]
            .into_iter()
            .map(Cell::from)
            .filter(|&a| {
                let sq = EmptySquare { anchor: a, index: 2, primed: true };
                sq.cells().iter().all(|&c| !lp(T, 0).contains(c)) && sq.cells().iter().any(|c| c.distance(g) == 1)
            })
            .collect();
        assert_eq!(empty, vec![Cell::new(-1, -2)]);
    }

    #[test]
    fn responsible_examples() {
        assert_eq!(responsible_guard(lp(S, 0), Cell::new(-1, 0)).unwrap(), Cell::new(0, 0));
        // scan of the five candidates: only (0,0) has f = 0
        assert_eq!(responsible_guard(lp(S, 0), Cell::new(0, -1)).unwrap(), Cell::new(0, 0));
        assert_eq!(responsible_guard(lp(T, 0), Cell::new(1, 0)).unwrap(), Cell::new(0, 0));
    }

    #[test]
    fn first_case_moves() {
        // attack above the guard on a straight placement
        let g = Cell::new(3, 4);
        let l = LatticePlacement { family: S, t: f_value(g, S) };
        let step = rotate_square_step(l, g.offset(-1, 0)).unwrap();
        assert_eq!(step.after.family, T);
        assert_eq!(step.after.t, Residue::reduce(2 * 3 + 4 - 2));
        assert_eq!(step.pattern_square.index, 0);
        assert_eq!(step.rotation, Rotation::Clockwise);
        let moves: Vec<(Cell, Cell)> = step.local_moves.moves().copied().collect();
        let expect: Vec<(Cell, Cell)> = MovePlan::new(
            [((0, 0), (-1, 0)), ((-2, 1), (-2, 2)), ((-1, 3), (0, 3)), ((1, 2), (1, 1))]
                .into_iter()
                .map(|(a, b)| (Cell::from(a), Cell::from(b)))
                .collect(),
        )
        .pairs()
        .to_vec();
        assert_eq!(moves, expect);
    }

    #[test]
    fn residue_formulas() {
        for x in -3..3 {
            for y in -3..3 {
                let g = Cell::new(x, y);
                let ls = LatticePlacement { family: S, t: f_value(g, S) };
                let right = rotate_square_step(ls, g.offset(0, 1)).unwrap();
                assert_eq!(right.after.t, Residue::reduce(2 * x as i64 + y as i64 + 1));
                let lt = LatticePlacement { family: T, t: f_value(g, T) };
                let right = rotate_square_step(lt, g.offset(0, 1)).unwrap();
                assert_eq!(right.after, LatticePlacement { family: S, t: Residue::reduce(x as i64 + 2 * y as i64 + 2) });
            }
        }
    }

    #[test]
    fn expansion_repeats_every_five() {
        let l = lp(S, 0);
        let step = rotate_square_step(l, Cell::new(-1, 0)).unwrap();
        let plan = expand_step(&step, Window::around(Cell::new(0, 0), 10));
        for c in [(-2, 1), (3, 1), (-7, 1), (-2, 6), (-2, -4)] {
            let c = Cell::from(c);
            assert_eq!(plan.target_of(c), Some(c.offset(0, 1)), "{c}");
        }
        for c in [(-3, -1), (2, 4), (-8, -6), (7, -1)] {
            let c = Cell::from(c);
            assert_eq!(plan.target_of(c), Some(c), "{c}");
        }
        // four movers and one still guard per 5x5 block
        for anchor in [(-10, -10), (-3, 2), (4, -7)] {
            let block = Window::new(anchor.0, anchor.0 + 4, anchor.1, anchor.1 + 4).unwrap();
            let moving = block
                .cells()
                .filter(|&c| l.contains(c))
                .filter(|&c| plan.target_of(c) != Some(c))
                .count();
            assert_eq!(moving, 4);
        }
    }

    #[test]
    fn every_case_checks_out() {
        for l in LatticePlacement::all() {
            for attack in Window::around(Cell::new(0, 0), 2).cells().filter(|&c| !l.contains(c)) {
                let w = Window::around(attack, 10);
                let step = step_report(l, attack, w).unwrap_or_else(|e| panic!("{l} {attack}: {e}"));
                assert_ne!(step.after.family, step.before.family);
                for s in step.pattern_square.cells() {
                    assert!(!step.before.contains(s) && !step.after.contains(s));
                }
                for (from, to) in step.local_moves.moves() {
                    assert_eq!(from.distance(*to), 1);
                }
            }
        }
    }

    #[test]
    fn frozen_mover_is_caught() {
        let l = lp(T, 2);
        let attack = Cell::new(0, 0);
        let w = Window::around(attack, 10);
        let step = rotate_square_step(l, attack).unwrap();
        let plan = expand_step(&step, w.grow(1));
        assert!(check_expanded_plan(&step, &plan, w).is_ok());
        let (from, _) = *step.local_moves.moves().nth(1).unwrap();
        let frozen = step.guard.offset(from.row, from.col);
        let broken = MovePlan::new(
            plan.pairs()
                .iter()
                .map(|&(a, b)| if a == frozen { (a, a) } else { (a, b) })
                .collect(),
        );
        assert!(check_expanded_plan(&step, &broken, w).is_err());
        assert!(!verify_step_in_window(l, attack, Window::around(attack, 3)));
    }
}
