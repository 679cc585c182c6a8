//! Saturated rim. The interior follows the lattice step; every guard that
//! the lattice would push onto the rim is absorbed by shifting rim guards
//! toward the nearest cell where a rim guard steps inwards.

use std::collections::BTreeMap;

use super::{check_congruent, grid_placement, interior_window, GameState, Rim, Sabotage, Side, Variant};
use crate::error::Error;
use crate::grid::{validate_move_plan, Cell, MovePlan};
use crate::infinite::{expand_step, rotate_square_step};
use crate::pattern::{materialize_grid, pick_max_residue, LatticePlacement, PatternFamily};

pub fn init(m: u32, n: u32) -> Result<GameState, Error> {
    let dims = check_congruent(m, n)?;
    let pattern = LatticePlacement {
        family: PatternFamily::Straight,
        t: pick_max_residue(m, n, PatternFamily::Straight),
    };
    let mut cells = materialize_grid(pattern, dims).into_cells();
    cells.extend(Rim::new(dims).cells());
    Ok(GameState {
        dims,
        placement: grid_placement(cells, dims)?,
        interior_pattern: pattern,
        variant: Variant::FullBoundary,
        round: 0,
        core: dims,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Crossing {
    /// An interior guard steps onto the rim.
    Exit,
    /// A rim guard steps into the interior.
    Entry,
}

/// Exits and entries per side, by position along the side.
pub fn crossings(state: &GameState, plan: &MovePlan) -> [(usize, usize); 4] {
    let rim = Rim::new(state.dims);
    let inner = interior_window(state.dims);
    let mut out = [(0, 0); 4];
    for &(from, to) in plan.moves() {
        match (inner.contains(from), inner.contains(to)) {
            (true, false) => {
                if let Some((side, _)) = rim.locate(to) {
                    out[side.index()].0 += 1;
                }
            }
            (false, true) => {
                if let Some((side, _)) = rim.locate(from) {
                    out[side.index()].1 += 1;
                }
            }
            _ => {}
        }
    }
    out
}

pub(super) fn step(state: &GameState, attack: Cell, sabotage: Sabotage) -> Result<(GameState, MovePlan), Error> {
    let dims = state.dims;
    let rim = Rim::new(dims);
    let inner = interior_window(dims);
    let symbolic = rotate_square_step(state.interior_pattern, attack)?;
    let lattice = expand_step(&symbolic, dims.as_window());

    let mut moves: BTreeMap<Cell, Cell> = rim.cells().map(|c| (c, c)).collect();
    let mut events: BTreeMap<Side, Vec<(i32, Crossing)>> = BTreeMap::new();
    for &(from, to) in lattice.pairs() {
        match (inner.contains(from), inner.contains(to)) {
            (true, true) => {
                moves.insert(from, to);
            }
            (true, false) => {
                let (side, pos) = rim
                    .locate(to)
                    .ok_or_else(|| Error::Internal(format!("{from} -> {to} leaves the grid")))?;
                events.entry(side).or_default().push((pos, Crossing::Exit));
                moves.insert(from, to);
            }
            (false, true) => {
                let (side, pos) = rim
                    .locate(from)
                    .ok_or_else(|| Error::Internal(format!("{from} -> {to} enters from a corner")))?;
                events.entry(side).or_default().push((pos, Crossing::Entry));
                moves.insert(from, to);
            }
            // rim to rim, or outside the grid: the rim is saturated anyway
            (false, false) => {}
        }
    }

    if !sabotage.skip_boundary_shift {
        for (side, mut ev) in events {
            ev.sort();
            if ev.len() % 2 != 0 {
                return Err(Error::InvariantViolation(format!("unbalanced crossings on {side:?}: {ev:?}")));
            }
            for pair in ev.chunks(2) {
                let ((p, a), (q, b)) = (pair[0], pair[1]);
                if a == b {
                    return Err(Error::InvariantViolation(format!(
                        "crossings on {side:?} do not alternate: {ev:?}"
                    )));
                }
                // Rim guards between the two events shift one cell toward the entry.
                let (range, delta) = if a == Crossing::Exit { (p..q, 1) } else { (p + 1..q + 1, -1) };
                for pos in range {
                    moves.insert(rim.cell(side, pos), rim.cell(side, pos + delta));
                }
            }
        }
    }

    let plan = MovePlan::new(moves.into_iter().collect());
    let after = grid_placement(plan.targets(), dims);
    let after = match after {
        Ok(p) if plan.len() == state.placement.len() => p,
        _ => {
            return Err(Error::InvariantViolation(format!(
                "round {}: move plan for {attack} collides on the rim",
                state.round + 1
            )))
        }
    };
    validate_move_plan(&state.placement, &plan, attack, &after)
        .map_err(|v| Error::InvariantViolation(format!("round {}: {v}", state.round + 1)))?;
    Ok((
        GameState {
            placement: after,
            interior_pattern: symbolic.after,
            round: state.round + 1,
            ..state.clone()
        },
        plan,
    ))
}
