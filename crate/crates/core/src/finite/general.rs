//! Arbitrary dimensions: the improved strategy on the largest congruent
//! subgrid at the origin, every leftover cell permanently guarded.

use super::improved::expected_cells;
use super::{grid_placement, improved_budget, GameState, Variant};
use crate::error::Error;
use crate::grid::{Cell, GridDims};
use crate::pattern::{pick_max_residue, LatticePlacement, PatternFamily};

/// Largest value `<= v` that is congruent to 2 mod 5.
pub fn congruent_floor(v: u32) -> u32 {
    v - (v + 3) % 5
}

/// Cells of `dims` outside `core`.
pub fn strip_cells(dims: GridDims, core: GridDims) -> impl Iterator<Item = Cell> {
    (0..dims.m as i32)
        .flat_map(move |r| (0..dims.n as i32).map(move |c| Cell::new(r, c)))
        .filter(move |&c| !core.contains(c))
}

pub fn budget(m: u32, n: u32) -> u64 {
    let (cm, cn) = (congruent_floor(m), congruent_floor(n));
    improved_budget(cm, cn) + (m as u64 * n as u64 - cm as u64 * cn as u64)
}

pub fn init(m: u32, n: u32) -> Result<GameState, Error> {
    if m < 16 || n < 16 {
        return Err(Error::BadDimensions(format!("{m}x{n}: both sides must be at least 16")));
    }
    let dims = GridDims::new(m, n)?;
    let core = GridDims::new(congruent_floor(m), congruent_floor(n))?;
    let pattern = LatticePlacement {
        family: PatternFamily::Straight,
        t: pick_max_residue(core.m, core.n, PatternFamily::Straight),
    };
    Ok(GameState {
        dims,
        placement: grid_placement(expected_cells(dims, core, pattern), dims)?,
        interior_pattern: pattern,
        variant: Variant::General,
        round: 0,
        core,
    })
}
