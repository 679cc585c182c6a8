//! Guard strategies on finite grids `P_m x P_n`.
//!
//! The interior `(m-2) x (n-2)` always carries a lattice pattern; the rim is
//! either saturated ([`Variant::FullBoundary`]) or covered by three guards
//! per five-cell side segment plus the corners ([`Variant::Improved`]).
//! [`Variant::General`] runs the improved strategy on the largest suitable
//! subgrid and saturates the leftover strips.

pub mod catalogue;
pub mod full_boundary;
pub mod general;
pub mod improved;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grid::{is_dominating, Bound, Cell, GridDims, GuardPlacement, MovePlan, Window};
use crate::pattern::LatticePlacement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[serde(alias = "full")]
    FullBoundary,
    Improved,
    General,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::FullBoundary => "full",
            Variant::Improved => "improved",
            Variant::General => "general",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "full" | "full_boundary" | "full-boundary" => Ok(Variant::FullBoundary),
            "improved" => Ok(Variant::Improved),
            "general" => Ok(Variant::General),
            other => Err(Error::BadDimensions(format!("unknown variant {other:?}"))),
        }
    }
}

/// Snapshot of a finite game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub dims: GridDims,
    pub placement: GuardPlacement,
    /// Pattern carried by the interior of `core`.
    pub interior_pattern: LatticePlacement,
    pub variant: Variant,
    pub round: u64,
    /// Subgrid at the origin the strategy runs on; the whole grid except
    /// for [`Variant::General`].
    pub core: GridDims,
}

/// Per-round invariant checks; `true` means the invariant holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantFlags {
    pub dominating: bool,
    pub pattern_contained: bool,
    /// Full boundary: rim saturated. Improved: corners held and three
    /// guards per side segment. General: the same on the core, strips
    /// saturated.
    pub boundary_cover: bool,
    /// Improved and general only; always `true` for full boundary.
    pub segments_identical: bool,
    pub guard_count: bool,
}

impl InvariantFlags {
    pub fn all(&self) -> bool {
        self.dominating && self.pattern_contained && self.boundary_cover && self.segments_identical && self.guard_count
    }

    /// Names of the failing flags.
    pub fn failures(&self) -> Vec<&'static str> {
        [
            ("dominating", self.dominating),
            ("pattern_contained", self.pattern_contained),
            ("boundary_cover", self.boundary_cover),
            ("segments_identical", self.segments_identical),
            ("guard_count", self.guard_count),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }
}

/// Test hooks that break the strategy on purpose.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Sabotage {
    /// Full boundary: let crossings collide instead of shifting the rim.
    pub skip_boundary_shift: bool,
}

/// `true` iff both sides are at least 7 and congruent to 2 mod 5.
pub fn congruent_dims(m: u32, n: u32) -> bool {
    m >= 7 && n >= 7 && m % 5 == 2 && n % 5 == 2
}

fn check_congruent(m: u32, n: u32) -> Result<GridDims, Error> {
    if !congruent_dims(m, n) {
        return Err(Error::BadDimensions(format!(
            "{m}x{n}: both sides must be at least 7 and congruent to 2 mod 5"
        )));
    }
    GridDims::new(m, n)
}

/// Guard budget of the full-boundary strategy, `(mn + 8(m+n) - 16) / 5`.
pub fn full_boundary_budget(m: u32, n: u32) -> u64 {
    let (m, n) = (m as u64, n as u64);
    (m * n + 8 * (m + n) - 16) / 5
}

/// Guard budget of the improved strategy, `(mn + 4(m+n)) / 5`.
pub fn improved_budget(m: u32, n: u32) -> u64 {
    let (m, n) = (m as u64, n as u64);
    (m * n + 4 * (m + n)) / 5
}

pub fn init(variant: Variant, m: u32, n: u32) -> Result<GameState, Error> {
    match variant {
        Variant::FullBoundary => full_boundary::init(m, n),
        Variant::Improved => improved::init(m, n),
        Variant::General => general::init(m, n),
    }
}

/// One round: answers `attack` and checks every invariant afterwards.
pub fn step(state: &GameState, attack: Cell) -> Result<(GameState, MovePlan), Error> {
    step_with(state, attack, Sabotage::default())
}

pub fn step_with(state: &GameState, attack: Cell, sabotage: Sabotage) -> Result<(GameState, MovePlan), Error> {
    if !state.dims.contains(attack) {
        return Err(Error::CellOutOfBounds(attack));
    }
    if state.placement.contains(attack) {
        return Err(Error::AttackOnGuard(attack));
    }
    let (next, plan) = match state.variant {
        Variant::FullBoundary => full_boundary::step(state, attack, sabotage)?,
        Variant::Improved | Variant::General => improved::step(state, attack)?,
    };
    let flags = check_invariants(&next);
    if !flags.all() {
        return Err(Error::InvariantViolation(format!(
            "round {} attack {attack}: {} failed\n{}",
            next.round,
            flags.failures().join(", "),
            next.placement.render(&next.dims.as_window(), Some(attack))
        )));
    }
    Ok((next, plan))
}

pub fn check_invariants(state: &GameState) -> InvariantFlags {
    let core = state.core;
    let pattern_contained = core
        .interior()
        .map(|w| w.cells().filter(|&c| state.interior_pattern.contains(c)).all(|c| state.placement.contains(c)))
        .unwrap_or(false);
    let (boundary_cover, segments_identical, expected) = match state.variant {
        Variant::FullBoundary => (
            Rim::new(core).cells().all(|c| state.placement.contains(c)),
            true,
            full_boundary_budget(core.m, core.n),
        ),
        Variant::Improved | Variant::General => {
            let rim = Rim::new(core);
            let corners = core.corners().iter().all(|&c| state.placement.contains(c));
            let per_segment = rim.segments().all(|seg| seg.iter().filter(|c| state.placement.contains(**c)).count() == 3);
            let strips = general::strip_cells(state.dims, core).all(|c| state.placement.contains(c));
            let strip_count = general::strip_cells(state.dims, core).count() as u64;
            (
                corners && per_segment && strips,
                rim.segments_identical(&state.placement),
                improved_budget(core.m, core.n) + strip_count,
            )
        }
    };
    InvariantFlags {
        dominating: is_dominating(&state.placement),
        pattern_contained,
        boundary_cover,
        segments_identical,
        guard_count: state.placement.len() as u64 == expected,
    }
}

/// The four sides of a congruent grid, each split into five-cell segments.
///
/// Sides are indexed top, bottom, left, right; positions along a side run
/// `1..=len` (columns for top/bottom, rows for left/right).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rim {
    pub dims: GridDims,
}

pub const SIDES: [Side; 4] = [Side::Top, Side::Bottom, Side::Left, Side::Right];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

impl Side {
    pub fn index(self) -> usize {
        self as usize
    }
}

impl Rim {
    pub fn new(dims: GridDims) -> Self {
        Rim { dims }
    }

    /// Number of non-corner cells on `side`.
    pub fn len(&self, side: Side) -> i32 {
        match side {
            Side::Top | Side::Bottom => self.dims.n as i32 - 2,
            Side::Left | Side::Right => self.dims.m as i32 - 2,
        }
    }

    pub fn cell(&self, side: Side, pos: i32) -> Cell {
        let (last_r, last_c) = (self.dims.m as i32 - 1, self.dims.n as i32 - 1);
        match side {
            Side::Top => Cell::new(0, pos),
            Side::Bottom => Cell::new(last_r, pos),
            Side::Left => Cell::new(pos, 0),
            Side::Right => Cell::new(pos, last_c),
        }
    }

    /// Side and position of a non-corner rim cell.
    pub fn locate(&self, c: Cell) -> Option<(Side, i32)> {
        let (last_r, last_c) = (self.dims.m as i32 - 1, self.dims.n as i32 - 1);
        if !self.dims.contains(c) {
            return None;
        }
        let row_inner = (1..last_r).contains(&c.row);
        let col_inner = (1..last_c).contains(&c.col);
        match (c.row, c.col) {
            (0, _) if col_inner => Some((Side::Top, c.col)),
            (r, _) if r == last_r && col_inner => Some((Side::Bottom, c.col)),
            (_, 0) if row_inner => Some((Side::Left, c.row)),
            (_, k) if k == last_c && row_inner => Some((Side::Right, c.row)),
            _ => None,
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.dims
            .cells()
            .filter(move |&c| c.row == 0 || c.col == 0 || c.row == self.dims.m as i32 - 1 || c.col == self.dims.n as i32 - 1)
    }

    /// Five-cell segments of every side.
    pub fn segments(&self) -> impl Iterator<Item = Vec<Cell>> + '_ {
        SIDES.into_iter().flat_map(move |side| {
            (0..self.len(side) / 5).map(move |k| (1..=5).map(|j| self.cell(side, 5 * k + j)).collect())
        })
    }

    /// Every segment of a side shows the same occupancy.
    pub fn segments_identical(&self, p: &GuardPlacement) -> bool {
        SIDES.into_iter().all(|side| {
            let pattern = |k: i32| -> Vec<bool> { (1..=5).map(|j| p.contains(self.cell(side, 5 * k + j))).collect() };
            let first = pattern(0);
            (1..self.len(side) / 5).all(|k| pattern(k) == first)
        })
    }

    /// Folds a cell of a congruent grid onto the 7x7 grid: the rim stays
    /// on the rim and every other coordinate is reduced into `1..=5`.
    pub fn local(&self, c: Cell) -> Cell {
        let fold = |v: i32, len: u32| -> i32 {
            if v == 0 {
                0
            } else if v == len as i32 - 1 {
                6
            } else {
                1 + (v - 1).rem_euclid(5)
            }
        };
        Cell::new(fold(c.row, self.dims.m), fold(c.col, self.dims.n))
    }
}

pub(crate) fn grid_placement(cells: impl IntoIterator<Item = Cell>, dims: GridDims) -> Result<GuardPlacement, Error> {
    GuardPlacement::new(cells, Bound::Grid(dims))
}

pub(crate) fn interior_window(dims: GridDims) -> Window {
    dims.as_window().shrink(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets_are_integral() {
        for m in (7..=52).filter(|m| m % 5 == 2) {
            for n in (7..=52).filter(|n| n % 5 == 2) {
                let (mm, nn) = (m as u64, n as u64);
                assert_eq!(full_boundary_budget(m, n) * 5, mm * nn + 8 * (mm + nn) - 16);
                assert_eq!(improved_budget(m, n) * 5, mm * nn + 4 * (mm + nn));
            }
        }
        assert_eq!(full_boundary_budget(7, 7), 29);
        assert_eq!(full_boundary_budget(7, 12), 44);
        assert_eq!(full_boundary_budget(12, 12), 64);
        assert_eq!(improved_budget(7, 7), 21);
        assert_eq!(improved_budget(12, 12), 48);
        assert_eq!(improved_budget(12, 17), 64);
    }

    #[test]
    fn rim_geometry() {
        let rim = Rim::new(GridDims::new(12, 17).unwrap());
        assert_eq!(rim.len(Side::Top), 15);
        assert_eq!(rim.len(Side::Left), 10);
        assert_eq!(rim.segments().count(), 3 + 3 + 2 + 2);
        assert_eq!(rim.cells().count(), 2 * (12 + 17) - 4);
        assert_eq!(rim.locate(Cell::new(11, 3)), Some((Side::Bottom, 3)));
        assert_eq!(rim.locate(Cell::new(0, 0)), None);
        assert_eq!(rim.local(Cell::new(11, 16)), Cell::new(6, 6));
        assert_eq!(rim.local(Cell::new(6, 7)), Cell::new(1, 2));
        assert_eq!(rim.local(Cell::new(0, 12)), Cell::new(0, 2));
    }

    #[test]
    fn variant_names_round_trip() {
        for v in [Variant::FullBoundary, Variant::Improved, Variant::General] {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
    }
}
