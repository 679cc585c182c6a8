//! Grid geometry, domination predicates and the move-legality oracle.
//!
//! Coordinates follow the screen convention: row `r` is above row `r + 1`
//! and column `c` is left of column `c + 1`. Cells are signed so that the
//! infinite grid can be addressed around the origin.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matching::Matcher;

/// A lattice coordinate `(row, col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl From<[i32; 2]> for Cell {
    fn from([row, col]: [i32; 2]) -> Self {
        Cell { row, col }
    }
}

impl From<Cell> for [i32; 2] {
    fn from(c: Cell) -> Self {
        [c.row, c.col]
    }
}

impl From<(i32, i32)> for Cell {
    fn from((row, col): (i32, i32)) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// The four unit steps, in the order up, down, left, right.
pub const STEPS: [(i32, i32); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

impl Cell {
    pub const fn new(row: i32, col: i32) -> Self {
        Cell { row, col }
    }

    pub const fn offset(self, dr: i32, dc: i32) -> Self {
        Cell {
            row: self.row + dr,
            col: self.col + dc,
        }
    }

    /// Graph distance on the grid (Manhattan distance).
    pub fn distance(self, other: Cell) -> u32 {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }

    /// The cell itself followed by its up/down/left/right neighbours.
    pub fn closed_neighbors(self) -> [Cell; 5] {
        [
            self,
            self.offset(-1, 0),
            self.offset(1, 0),
            self.offset(0, -1),
            self.offset(0, 1),
        ]
    }
}

/// Dimensions of the finite grid `P_m x P_n` (`m` rows, `n` columns).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridDims {
    pub m: u32,
    pub n: u32,
}

/// Position of a cell relative to the rim of a finite grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Corner,
    Boundary,
    Interior,
}

impl GridDims {
    pub fn new(m: u32, n: u32) -> Result<Self, Error> {
        if m == 0 || n == 0 {
            return Err(Error::BadDimensions(format!("{m}x{n}: both sides must be positive")));
        }
        Ok(GridDims { m, n })
    }

    pub fn cell_count(&self) -> usize {
        (self.m * self.n) as usize
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.row >= 0 && c.col >= 0 && (c.row as u32) < self.m && (c.col as u32) < self.n
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let (m, n) = (self.m as i32, self.n as i32);
        (0..m).flat_map(move |r| (0..n).map(move |c| Cell::new(r, c)))
    }

    pub fn index(&self, c: Cell) -> usize {
        (c.row as u32 * self.n + c.col as u32) as usize
    }

    pub fn cell_at(&self, idx: usize) -> Cell {
        Cell::new((idx as u32 / self.n) as i32, (idx as u32 % self.n) as i32)
    }

    pub fn as_window(&self) -> Window {
        Window {
            row_lo: 0,
            row_hi: self.m as i32 - 1,
            col_lo: 0,
            col_hi: self.n as i32 - 1,
        }
    }

    /// Rows `1..m-1` by columns `1..n-1`; `None` when the grid has no interior.
    pub fn interior(&self) -> Option<Window> {
        (self.m >= 3 && self.n >= 3).then(|| self.as_window().shrink(1))
    }

    pub fn kind(&self, c: Cell) -> CellKind {
        let top_or_bottom = c.row == 0 || c.row == self.m as i32 - 1;
        let left_or_right = c.col == 0 || c.col == self.n as i32 - 1;
        match (top_or_bottom, left_or_right) {
            (true, true) => CellKind::Corner,
            (true, false) | (false, true) => CellKind::Boundary,
            (false, false) => CellKind::Interior,
        }
    }

    pub fn corners(&self) -> Vec<Cell> {
        let (r, c) = (self.m as i32 - 1, self.n as i32 - 1);
        let mut out = vec![Cell::new(0, 0), Cell::new(0, c), Cell::new(r, 0), Cell::new(r, c)];
        out.sort();
        out.dedup();
        out
    }

    /// Non-corner rim cells.
    pub fn boundary_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells().filter(move |&c| self.kind(c) == CellKind::Boundary)
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

/// Inclusive rectangular window of the (possibly infinite) grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub row_lo: i32,
    pub row_hi: i32,
    pub col_lo: i32,
    pub col_hi: i32,
}

impl Window {
    pub fn new(row_lo: i32, row_hi: i32, col_lo: i32, col_hi: i32) -> Result<Self, Error> {
        if row_lo > row_hi || col_lo > col_hi {
            return Err(Error::BadWindow {
                row_lo,
                row_hi,
                col_lo,
                col_hi,
            });
        }
        Ok(Window {
            row_lo,
            row_hi,
            col_lo,
            col_hi,
        })
    }

    /// Square window of the given radius around `center`.
    pub fn around(center: Cell, radius: i32) -> Self {
        Window {
            row_lo: center.row - radius,
            row_hi: center.row + radius,
            col_lo: center.col - radius,
            col_hi: center.col + radius,
        }
    }

    pub fn contains(&self, c: Cell) -> bool {
        (self.row_lo..=self.row_hi).contains(&c.row) && (self.col_lo..=self.col_hi).contains(&c.col)
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.row_lo <= other.row_lo
            && other.row_hi <= self.row_hi
            && self.col_lo <= other.col_lo
            && other.col_hi <= self.col_hi
    }

    pub fn rows(&self) -> u32 {
        (self.row_hi - self.row_lo + 1) as u32
    }

    pub fn cols(&self) -> u32 {
        (self.col_hi - self.col_lo + 1) as u32
    }

    /// Window shrunk by `margin` on every side. May become empty (inverted),
    /// in which case `cells` yields nothing.
    pub fn shrink(&self, margin: i32) -> Window {
        Window {
            row_lo: self.row_lo + margin,
            row_hi: self.row_hi - margin,
            col_lo: self.col_lo + margin,
            col_hi: self.col_hi - margin,
        }
    }

    pub fn grow(&self, margin: i32) -> Window {
        self.shrink(-margin)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let w = *self;
        (w.row_lo..=w.row_hi).flat_map(move |r| (w.col_lo..=w.col_hi).map(move |c| Cell::new(r, c)))
    }
}

/// What a placement (or a neighbourhood query) is confined to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bound {
    Grid(GridDims),
    Window(Window),
    Unbounded,
}

impl Bound {
    pub fn contains(&self, c: Cell) -> bool {
        match self {
            Bound::Grid(d) => d.contains(c),
            Bound::Window(w) => w.contains(c),
            Bound::Unbounded => true,
        }
    }
}

impl From<GridDims> for Bound {
    fn from(d: GridDims) -> Self {
        Bound::Grid(d)
    }
}

impl From<Window> for Bound {
    fn from(w: Window) -> Self {
        Bound::Window(w)
    }
}

/// `N[c]` clipped to `bound`: 5 cells in the interior, 4 on a side, 3 at a corner.
pub fn closed_neighborhood(c: Cell, bound: Bound) -> BTreeSet<Cell> {
    c.closed_neighbors().into_iter().filter(|&x| bound.contains(x)).collect()
}

/// A set of distinct guard cells, all inside `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardPlacement {
    cells: BTreeSet<Cell>,
    bound: Bound,
}

impl GuardPlacement {
    pub fn new(cells: impl IntoIterator<Item = Cell>, bound: impl Into<Bound>) -> Result<Self, Error> {
        let bound = bound.into();
        let mut set = BTreeSet::new();
        for c in cells {
            if !bound.contains(c) {
                return Err(Error::CellOutOfBounds(c));
            }
            if !set.insert(c) {
                return Err(Error::DuplicateGuard(c));
            }
        }
        Ok(GuardPlacement { cells: set, bound })
    }

    pub fn empty(bound: impl Into<Bound>) -> Self {
        GuardPlacement {
            cells: BTreeSet::new(),
            bound: bound.into(),
        }
    }

    /// Builds from a set that is already known to be inside `bound`.
    pub(crate) fn from_set_unchecked(cells: BTreeSet<Cell>, bound: Bound) -> Self {
        debug_assert!(cells.iter().all(|&c| bound.contains(c)));
        GuardPlacement { cells, bound }
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn into_cells(self) -> BTreeSet<Cell> {
        self.cells
    }

    pub fn bound(&self) -> Bound {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.contains(&c)
    }

    /// Number of guards in `N[c]`.
    pub fn dominator_count(&self, c: Cell) -> usize {
        c.closed_neighbors().iter().filter(|x| self.cells.contains(x)).count()
    }

    pub fn dominates(&self, c: Cell) -> bool {
        c.closed_neighbors().iter().any(|x| self.cells.contains(x))
    }

    /// Text rendering over `window`: `#` guard, `.` empty, `!` attacked cell.
    pub fn render(&self, window: &Window, attack: Option<Cell>) -> String {
        let mut out = String::with_capacity(((window.cols() + 1) * window.rows()) as usize);
        for r in window.row_lo..=window.row_hi {
            for c in window.col_lo..=window.col_hi {
                let cell = Cell::new(r, c);
                out.push(if Some(cell) == attack {
                    '!'
                } else if self.cells.contains(&cell) {
                    '#'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out
    }
}

/// True iff every cell of the finite grid lies in `N[p]`.
///
/// Placements bound to a window are checked over the whole window; unbounded
/// placements have no finite vertex set and are reported as not dominating.
pub fn is_dominating(p: &GuardPlacement) -> bool {
    match p.bound {
        Bound::Grid(d) => d.cells().all(|c| p.dominates(c)),
        Bound::Window(w) => w.cells().all(|c| p.dominates(c)),
        Bound::Unbounded => false,
    }
}

/// True iff every cell of `region` is dominated.
pub fn dominates_region(p: &GuardPlacement, region: &Window) -> bool {
    region.cells().all(|c| p.dominates(c))
}

/// True iff every cell of `region` has exactly one guard in its closed neighbourhood.
pub fn is_perfect_on(p: &GuardPlacement, region: &Window) -> bool {
    region.cells().all(|c| p.dominator_count(c) == 1)
}

/// A simultaneous move of guards, as `(from, to)` pairs.
///
/// Construction does not check legality; that is [`validate_move_plan`]'s job,
/// so that deliberately broken plans can be represented and audited.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MovePlan {
    pairs: Vec<(Cell, Cell)>,
}

impl MovePlan {
    pub fn new(mut pairs: Vec<(Cell, Cell)>) -> Self {
        pairs.sort();
        MovePlan { pairs }
    }

    pub fn pairs(&self) -> &[(Cell, Cell)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs whose guard actually changes cell.
    pub fn moves(&self) -> impl Iterator<Item = &(Cell, Cell)> {
        self.pairs.iter().filter(|(a, b)| a != b)
    }

    pub fn targets(&self) -> BTreeSet<Cell> {
        self.pairs.iter().map(|&(_, t)| t).collect()
    }

    pub fn target_of(&self, from: Cell) -> Option<Cell> {
        self.pairs
            .binary_search_by(|(f, _)| f.cmp(&from))
            .ok()
            .map(|i| self.pairs[i].1)
    }
}

/// Why a move plan was rejected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanViolation {
    #[error("NOT_BIJECTIVE: plan does not map the old placement onto the new one")]
    NotBijective,
    #[error("DISTANCE_EXCEEDED: {from} -> {to}")]
    DistanceExceeded { from: Cell, to: Cell },
    #[error("ATTACK_UNCOVERED: {0} holds no guard after the move")]
    AttackUncovered(Cell),
    #[error("CELL_OUT_OF_BOUNDS: {0}")]
    CellOutOfBounds(Cell),
    #[error("DUPLICATE_OCCUPANCY: {0}")]
    DuplicateOccupancy(Cell),
}

impl PlanViolation {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            PlanViolation::NotBijective => "NOT_BIJECTIVE",
            PlanViolation::DistanceExceeded { .. } => "DISTANCE_EXCEEDED",
            PlanViolation::AttackUncovered(_) => "ATTACK_UNCOVERED",
            PlanViolation::CellOutOfBounds(_) => "CELL_OUT_OF_BOUNDS",
            PlanViolation::DuplicateOccupancy(_) => "DUPLICATE_OCCUPANCY",
        }
    }
}

/// The legality oracle for one guards' turn.
///
/// Accepts iff the plan maps `before` bijectively onto `after`, every guard
/// moves at most one step, and the attacked cell is occupied afterwards.
pub fn validate_move_plan(
    before: &GuardPlacement,
    plan: &MovePlan,
    attack: Cell,
    after: &GuardPlacement,
) -> Result<(), PlanViolation> {
    let mut sources = BTreeSet::new();
    let mut targets = BTreeSet::new();
    for &(from, to) in &plan.pairs {
        if !before.bound.contains(from) {
            return Err(PlanViolation::CellOutOfBounds(from));
        }
        if !after.bound.contains(to) {
            return Err(PlanViolation::CellOutOfBounds(to));
        }
        if !sources.insert(from) {
            return Err(PlanViolation::NotBijective);
        }
        if !targets.insert(to) {
            return Err(PlanViolation::DuplicateOccupancy(to));
        }
    }
    if sources != before.cells || targets != after.cells {
        return Err(PlanViolation::NotBijective);
    }
    if let Some(&(from, to)) = plan.pairs.iter().find(|(f, t)| f.distance(*t) > 1) {
        return Err(PlanViolation::DistanceExceeded { from, to });
    }
    if !after.cells.contains(&attack) {
        return Err(PlanViolation::AttackUncovered(attack));
    }
    Ok(())
}

/// Finds a plan moving `before` onto `after` with every guard stepping at
/// most once, via maximum bipartite matching. `None` if no such bijection.
pub fn find_transition(before: &GuardPlacement, after: &GuardPlacement) -> Option<MovePlan> {
    if before.len() != after.len() {
        return None;
    }
    let left: Vec<Cell> = before.cells.iter().copied().collect();
    let index: BTreeMap<Cell, usize> = after.cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let right: Vec<Cell> = after.cells.iter().copied().collect();
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|c| c.closed_neighbors().iter().filter_map(|x| index.get(x).copied()).collect())
        .collect();
    let mut matcher = Matcher::new(right.len());
    let assignment = matcher.perfect(&adj)?;
    Some(MovePlan::new(
        assignment.iter().enumerate().map(|(i, &j)| (left[i], right[j])).collect(),
    ))
}

/// True iff a legal one-round transition exists from `before` to `after`
/// answering `attack`.
pub fn transition_exists(before: &GuardPlacement, attack: Cell, after: &GuardPlacement) -> bool {
    !before.contains(attack) && after.contains(attack) && find_transition(before, after).is_some()
}
