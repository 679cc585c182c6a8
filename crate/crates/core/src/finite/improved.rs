//! Partial rim cover, driven by the 7x7 catalogue.
//!
//! The game state is one catalogue state copied into every interior block
//! and every side segment. An attack is folded onto the 7x7 grid, the
//! catalogue answers it there, and each guard of the large grid copies the
//! displacement of the 7x7 guard it folds onto.

use std::collections::BTreeMap;

use super::catalogue::{load, replicate};
use super::general::strip_cells;
use super::{check_congruent, grid_placement, GameState, Rim, Variant};
use crate::error::Error;
use crate::grid::{validate_move_plan, Cell, GridDims, MovePlan};
use crate::pattern::{pick_max_residue, LatticePlacement, PatternFamily};

pub fn init(m: u32, n: u32) -> Result<GameState, Error> {
    let dims = check_congruent(m, n)?;
    let pattern = LatticePlacement {
        family: PatternFamily::Straight,
        t: pick_max_residue(m, n, PatternFamily::Straight),
    };
    Ok(GameState {
        dims,
        placement: grid_placement(replicate(load().state(pattern), dims), dims)?,
        interior_pattern: pattern,
        variant: Variant::Improved,
        round: 0,
        core: dims,
    })
}

/// Placement for catalogue state `pattern` on `core`, plus saturated strips.
pub(super) fn expected_cells(dims: GridDims, core: GridDims, pattern: LatticePlacement) -> Vec<Cell> {
    let mut cells: Vec<Cell> = replicate(load().state(pattern), core).into_iter().collect();
    cells.extend(strip_cells(dims, core));
    cells
}

pub(super) fn step(state: &GameState, attack: Cell) -> Result<(GameState, MovePlan), Error> {
    let core = state.core;
    if !core.contains(attack) {
        return Err(Error::Internal(format!("{attack} lies in a saturated strip yet is unguarded")));
    }
    let rim = Rim::new(core);
    let cat = load();
    let from = state.interior_pattern.index();
    let local_attack = rim.local(attack);
    let t = cat
        .transition(from, local_attack)
        .ok_or_else(|| Error::Internal(format!("catalogue has no answer to {local_attack} in state {from}")))?;
    let disp: BTreeMap<Cell, (i32, i32)> = t
        .plan
        .pairs()
        .iter()
        .map(|&(a, b)| (a, (b.row - a.row, b.col - a.col)))
        .collect();

    let mut pairs = Vec::with_capacity(state.placement.len());
    for &g in state.placement.cells() {
        if !core.contains(g) {
            pairs.push((g, g));
            continue;
        }
        let local = rim.local(g);
        let &(dr, dc) = disp
            .get(&local)
            .ok_or_else(|| Error::InvariantViolation(format!("guard {g} folds onto empty cell {local}")))?;
        pairs.push((g, g.offset(dr, dc)));
    }
    let plan = MovePlan::new(pairs);
    let next_pattern = cat.states[t.to].pattern;
    let after = grid_placement(expected_cells(state.dims, core, next_pattern), state.dims)?;
    validate_move_plan(&state.placement, &plan, attack, &after)
        .map_err(|v| Error::InvariantViolation(format!("round {}: {v}", state.round + 1)))?;
    Ok((
        GameState {
            placement: after,
            interior_pattern: next_pattern,
            round: state.round + 1,
            ..state.clone()
        },
        plan,
    ))
}
