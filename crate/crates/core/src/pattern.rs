//! The modular dominating families `x + 2y = t (mod 5)` and their transposes.
//!
//! A [`LatticePlacement`] names one of ten perfect dominating sets of the
//! infinite grid without storing any cells; [`materialize`] restricts it to a
//! finite window.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grid::{is_dominating, Bound, Cell, GridDims, GuardPlacement, Window};

/// An element of `Z_5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Residue(u8);

impl Residue {
    pub const ALL: [Residue; 5] = [Residue(0), Residue(1), Residue(2), Residue(3), Residue(4)];

    /// Reduces any integer into `0..5`, negative values included.
    pub fn reduce(v: i64) -> Self {
        Residue(v.rem_euclid(5) as u8)
    }

    pub fn new(v: u8) -> Result<Self, Error> {
        if v < 5 {
            Ok(Residue(v))
        } else {
            Err(Error::BadDimensions(format!("residue {v} not in 0..5")))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn add(self, k: i64) -> Self {
        Residue::reduce(self.0 as i64 + k)
    }
}

impl TryFrom<u8> for Residue {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self, Error> {
        Residue::new(v)
    }
}

impl From<Residue> for u8 {
    fn from(r: Residue) -> u8 {
        r.0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which of the two lattice functions a placement uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PatternFamily {
    /// `row + 2 col`
    Straight,
    /// `col + 2 row`
    Transposed,
}

impl PatternFamily {
    pub fn flipped(self) -> Self {
        match self {
            PatternFamily::Straight => PatternFamily::Transposed,
            PatternFamily::Transposed => PatternFamily::Straight,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PatternFamily::Straight => "STRAIGHT",
            PatternFamily::Transposed => "TRANSPOSED",
        }
    }
}

impl std::str::FromStr for PatternFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "straight" | "d" => Ok(PatternFamily::Straight),
            "transposed" | "d'" | "dprime" => Ok(PatternFamily::Transposed),
            other => Err(Error::BadDimensions(format!("unknown pattern family {other:?}"))),
        }
    }
}

/// `f` (straight) or `f'` (transposed) evaluated at `c`.
pub fn f_value(c: Cell, family: PatternFamily) -> Residue {
    let (r, k) = (c.row as i64, c.col as i64);
    match family {
        PatternFamily::Straight => Residue::reduce(r + 2 * k),
        PatternFamily::Transposed => Residue::reduce(k + 2 * r),
    }
}

/// The infinite guard set `{c : f(c) = t}` of one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePlacement {
    pub family: PatternFamily,
    pub t: Residue,
}

impl LatticePlacement {
    pub fn new(family: PatternFamily, t: u8) -> Self {
        LatticePlacement {
            family,
            t: Residue::reduce(t as i64),
        }
    }

    /// All ten placements, straight family first.
    pub fn all() -> impl Iterator<Item = LatticePlacement> {
        [PatternFamily::Straight, PatternFamily::Transposed]
            .into_iter()
            .flat_map(|family| Residue::ALL.into_iter().map(move |t| LatticePlacement { family, t }))
    }

    /// Index in `0..10` matching the order of [`LatticePlacement::all`].
    pub fn index(self) -> usize {
        let base = match self.family {
            PatternFamily::Straight => 0,
            PatternFamily::Transposed => 5,
        };
        base + self.t.0 as usize
    }

    pub fn from_index(i: usize) -> Self {
        let family = if i < 5 {
            PatternFamily::Straight
        } else {
            PatternFamily::Transposed
        };
        LatticePlacement {
            family,
            t: Residue::reduce(i as i64 % 5),
        }
    }

    pub fn contains(self, c: Cell) -> bool {
        f_value(c, self.family) == self.t
    }
}

impl fmt::Display for LatticePlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            PatternFamily::Straight => write!(f, "D_{}", self.t),
            PatternFamily::Transposed => write!(f, "D'_{}", self.t),
        }
    }
}

/// Cells of `w` that belong to `lp`.
pub fn materialize(lp: LatticePlacement, w: Window) -> GuardPlacement {
    let cells: BTreeSet<Cell> = w.cells().filter(|&c| lp.contains(c)).collect();
    GuardPlacement::from_set_unchecked(cells, Bound::Window(w))
}

/// [`materialize`] on a finite grid, bound to the grid instead of a window.
pub fn materialize_grid(lp: LatticePlacement, dims: GridDims) -> GuardPlacement {
    let cells: BTreeSet<Cell> = dims.cells().filter(|&c| lp.contains(c)).collect();
    GuardPlacement::from_set_unchecked(cells, Bound::Grid(dims))
}

/// How many of `0..len` are congruent to `k` mod 5.
fn residue_count(len: u32, k: u8) -> u32 {
    let k = k as u32;
    if k >= len {
        0
    } else {
        (len - 1 - k) / 5 + 1
    }
}

/// `|V(t)|` (or `|V'(t)|`) on the `m x n` grid at the origin, counted by
/// column residue classes: every column holds `floor(m/5)` or `floor(m/5)+1`
/// pattern cells depending only on its index mod 5.
pub fn count_restriction(m: u32, n: u32, t: Residue, family: PatternFamily) -> u64 {
    // For the transposed family the roles of rows and columns swap.
    let (rows, cols) = match family {
        PatternFamily::Straight => (m, n),
        PatternFamily::Transposed => (n, m),
    };
    (0u8..5)
        .map(|col_res| {
            let row_res = Residue::reduce(t.0 as i64 - 2 * col_res as i64).0;
            residue_count(cols, col_res) as u64 * residue_count(rows, row_res) as u64
        })
        .sum()
}

/// The residue with the largest restriction; ties go to the smallest `t`.
pub fn pick_max_residue(m: u32, n: u32, family: PatternFamily) -> Residue {
    let mut best = Residue(0);
    let mut best_count = count_restriction(m, n, best, family);
    for t in &Residue::ALL[1..] {
        let c = count_restriction(m, n, *t, family);
        if c > best_count {
            best = *t;
            best_count = c;
        }
    }
    best
}

/// The residue with the smallest restriction; ties go to the smallest `t`.
pub fn pick_min_residue(m: u32, n: u32, family: PatternFamily) -> Residue {
    let mut best = Residue(0);
    let mut best_count = count_restriction(m, n, best, family);
    for t in &Residue::ALL[1..] {
        let c = count_restriction(m, n, *t, family);
        if c < best_count {
            best = *t;
            best_count = c;
        }
    }
    best
}

/// Size promised for [`chang_dominating_set`]: `floor((m+2)(n+2)/5) - 4`.
pub fn chang_bound(m: u32, n: u32) -> u64 {
    ((m as u64 + 2) * (n as u64 + 2)) / 5 - 4
}

/// A dominating set of the `m x n` grid of size `floor((m+2)(n+2)/5) - 4`.
///
/// Takes a straight pattern on the grid extended by one cell on each side,
/// pulls every guard of the extra ring onto the nearest rim cell, then saves
/// one guard in each 4x4 corner block by re-placing that block's guards with
/// one fewer. The residue and the corner re-placements are found by search;
/// the first combination that dominates wins.
pub fn chang_dominating_set(m: u32, n: u32) -> Result<GuardPlacement, Error> {
    if m < 8 || n < 8 {
        return Err(Error::BadDimensions(format!("{m}x{n}: both sides must be at least 8")));
    }
    let dims = GridDims::new(m, n)?;
    let target = chang_bound(m, n) as usize;
    let extended = dims.as_window().grow(1);
    let (mi, ni) = (m as i32, n as i32);

    'residues: for t in Residue::ALL {
        let lp = LatticePlacement {
            family: PatternFamily::Straight,
            t,
        };
        let mut cells: BTreeSet<Cell> = extended
            .cells()
            .filter(|&c| lp.contains(c))
            .map(|c| Cell::new(c.row.clamp(0, mi - 1), c.col.clamp(0, ni - 1)))
            .collect();
        if cells.len() != target + 4 {
            continue;
        }
        for block in corner_blocks(mi, ni) {
            match thin_block(&cells, dims, block) {
                Some(next) => cells = next,
                None => continue 'residues,
            }
        }
        let p = GuardPlacement::from_set_unchecked(cells, Bound::Grid(dims));
        if p.len() == target && is_dominating(&p) {
            return Ok(p);
        }
    }
    Err(Error::ConstructionFailed(format!("no residue/corner re-placement works for {m}x{n}")))
}

/// 4x4 blocks at the four corners.
fn corner_blocks(m: i32, n: i32) -> [Window; 4] {
    [
        Window { row_lo: 0, row_hi: 3, col_lo: 0, col_hi: 3 },
        Window { row_lo: 0, row_hi: 3, col_lo: n - 4, col_hi: n - 1 },
        Window { row_lo: m - 4, row_hi: m - 1, col_lo: 0, col_hi: 3 },
        Window { row_lo: m - 4, row_hi: m - 1, col_lo: n - 4, col_hi: n - 1 },
    ]
}

/// Replaces the guards inside `block` by one fewer guards (first subset in
/// lexicographic order) such that everything the block could dominate stays
/// dominated. `None` if no such subset exists.
fn thin_block(cells: &BTreeSet<Cell>, dims: GridDims, block: Window) -> Option<BTreeSet<Cell>> {
    let inside = cells.iter().filter(|c| block.contains(**c)).count();
    if inside == 0 {
        return None;
    }
    let outside: BTreeSet<Cell> = cells.iter().copied().filter(|c| !block.contains(*c)).collect();
    let slots: Vec<Cell> = block.cells().collect();
    // cells that only the block can still dominate
    let needy: Vec<Cell> = block
        .grow(1)
        .cells()
        .filter(|&x| dims.contains(x))
        .filter(|x| !x.closed_neighbors().iter().any(|y| outside.contains(y)))
        .collect();
    let k = inside - 1;
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let chosen: BTreeSet<Cell> = pick.iter().map(|&i| slots[i]).collect();
        if needy
            .iter()
            .all(|x| x.closed_neighbors().iter().any(|y| chosen.contains(y)))
        {
            let mut out = outside;
            out.extend(chosen);
            return Some(out);
        }
        // next k-combination of slots
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if pick[i] < slots.len() - k + i {
                break;
            }
        }
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}
