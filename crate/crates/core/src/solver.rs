//! Exact domination and eternal domination numbers of small grids and paths.
//!
//! Vertices are the cells of a `GridDims` in row-major order, packed into a
//! `u128`. A path `P_n` is the `1 x n` grid.
//!
//! The eternal solver works on the configuration graph: nodes are the
//! dominating `k`-subsets, and `C -> C'` is an edge when every guard of `C`
//! can step to a distinct cell of `C'`. A configuration is safe when every
//! unguarded vertex `v` has a safe successor containing `v`. The safe set is
//! the greatest fixpoint of that rule.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::grid::{Bound, Cell, GridDims, GuardPlacement};
use crate::matching::bitset_perfect_matching;

/// Default cap on `C(|V|, k)` for the eternal solver.
pub const DEFAULT_CAP: u64 = 10_000_000;
/// Largest vertex count solved by plain subset enumeration.
pub const EXHAUSTIVE_LIMIT: usize = 20;
/// Largest vertex count accepted by [`gamma`].
pub const GAMMA_LIMIT: usize = 100;

/// A grid or path small enough for bitset configurations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallGraph {
    pub dims: GridDims,
    closed: Vec<u128>,
    /// Vertices within distance 2, used by the packing bound.
    ball2: Vec<u128>,
}

impl SmallGraph {
    pub fn new(dims: GridDims) -> Result<Self, Error> {
        let size = dims.cell_count();
        if size > 127 {
            return Err(Error::ExceedsLimit(format!("{}x{} has {size} vertices, at most 127 fit", dims.m, dims.n)));
        }
        let bit = |c: Cell| 1u128 << dims.index(c);
        let closed: Vec<u128> = dims
            .cells()
            .map(|c| c.closed_neighbors().into_iter().filter(|&x| dims.contains(x)).map(bit).fold(0, |a, b| a | b))
            .collect();
        let ball2 = (0..size)
            .map(|v| bits(closed[v]).map(|u| closed[u]).fold(0, |a, b| a | b))
            .collect();
        Ok(SmallGraph { dims, closed, ball2 })
    }

    pub fn path(n: u32) -> Result<Self, Error> {
        Self::new(GridDims::new(1, n)?)
    }

    pub fn grid(m: u32, n: u32) -> Result<Self, Error> {
        Self::new(GridDims::new(m, n)?)
    }

    pub fn order(&self) -> usize {
        self.closed.len()
    }

    pub fn full(&self) -> u128 {
        (1u128 << self.order()) - 1
    }

    /// Closed neighbourhood masks, indexed by vertex.
    pub fn closed(&self) -> &[u128] {
        &self.closed
    }

    pub fn dominated_by(&self, set: u128) -> u128 {
        bits(set).fold(0, |acc, v| acc | self.closed[v])
    }

    pub fn is_dominating(&self, set: u128) -> bool {
        self.dominated_by(set) == self.full()
    }

    pub fn mask(&self, cells: impl IntoIterator<Item = Cell>) -> Result<u128, Error> {
        cells.into_iter().try_fold(0u128, |acc, c| {
            if self.dims.contains(c) {
                Ok(acc | 1u128 << self.dims.index(c))
            } else {
                Err(Error::CellOutOfBounds(c))
            }
        })
    }

    pub fn cells(&self, set: u128) -> Vec<Cell> {
        bits(set).map(|v| self.dims.cell_at(v)).collect()
    }

    pub fn placement(&self, set: u128) -> GuardPlacement {
        GuardPlacement::new(self.cells(set), Bound::Grid(self.dims)).expect("bit positions are distinct grid cells")
    }

    pub fn label(&self) -> String {
        if self.dims.m == 1 {
            format!("P_{}", self.dims.n)
        } else {
            format!("{}x{} grid", self.dims.m, self.dims.n)
        }
    }
}

/// `path:N` or `grid:MxN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphSpec {
    Path(u32),
    Grid(u32, u32),
}

impl GraphSpec {
    pub fn build(self) -> Result<SmallGraph, Error> {
        match self {
            GraphSpec::Path(n) => SmallGraph::path(n),
            GraphSpec::Grid(m, n) => SmallGraph::grid(m, n),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::BadDimensions(format!("expected path:N or grid:MxN, got {s:?}"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "path" => rest.parse().map(GraphSpec::Path).map_err(|_| bad()),
            "grid" => {
                let (m, n) = rest.split_once(['x', 'X']).ok_or_else(bad)?;
                Ok(GraphSpec::Grid(m.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Grid(m, n) => write!(f, "grid:{m}x{n}"),
        }
    }
}

/// Set bits of `mask`, lowest first.
pub fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let v = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(v)
    })
}

/// `C(n, k)`, saturating.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All `k`-subsets of `0..n` in increasing numeric order (Gosper's hack).
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u128> {
    let limit = 1u128 << n;
    let mut next = if k <= n { Some((1u128 << k) - 1) } else { None };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let succ = (((r ^ cur) >> 2) / c) | r;
            (succ < limit).then_some(succ)
        };
        Some(cur)
    })
}

/// Default search ceiling `ceil(mn/5) + 2(m+n)`.
pub fn default_kmax(dims: GridDims) -> u32 {
    (dims.m * dims.n).div_ceil(5) + 2 * (dims.m + dims.n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaMethod {
    Exhaustive,
    BranchAndBound,
}

/// Domination number with a minimum dominating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaResult {
    pub gamma: u32,
    pub witness: u128,
    pub method: GammaMethod,
}

/// Domination number, by subset enumeration up to [`EXHAUSTIVE_LIMIT`]
/// vertices and by branch and bound above.
pub fn gamma(g: &SmallGraph, kmax: u32) -> Result<GammaResult, Error> {
    let method = if g.order() <= EXHAUSTIVE_LIMIT { GammaMethod::Exhaustive } else { GammaMethod::BranchAndBound };
    gamma_with(g, kmax, method)
}

pub fn gamma_with(g: &SmallGraph, kmax: u32, method: GammaMethod) -> Result<GammaResult, Error> {
    if g.order() > GAMMA_LIMIT {
        return Err(Error::ExceedsLimit(format!("{} vertices, gamma accepts at most {GAMMA_LIMIT}", g.order())));
    }
    let found = match method {
        GammaMethod::Exhaustive => (1..=kmax.min(g.order() as u32))
            .find_map(|k| k_subsets(g.order(), k as usize).find(|&s| g.is_dominating(s))),
        GammaMethod::BranchAndBound => {
            let mut search = Bnb { g, best: kmax + 1, witness: None };
            search.run(0, 0, 0);
            search.witness
        }
    };
    found
        .map(|w| GammaResult { gamma: w.count_ones(), witness: w, method })
        .ok_or(Error::NotFound(kmax))
}

struct Bnb<'a> {
    g: &'a SmallGraph,
    best: u32,
    witness: Option<u128>,
}

impl Bnb<'_> {
    /// Lower bound on the guards still needed: undominated vertices that
    /// are pairwise more than two apart need distinct dominators.
    fn packing_bound(&self, undominated: u128) -> u32 {
        let mut blocked = 0u128;
        let mut count = 0;
        for v in bits(undominated) {
            if blocked >> v & 1 == 0 {
                count += 1;
                blocked |= self.g.ball2[v];
            }
        }
        count
    }

    fn run(&mut self, chosen: u128, dominated: u128, size: u32) {
        let undominated = self.g.full() & !dominated;
        if undominated == 0 {
            if size < self.best {
                self.best = size;
                self.witness = Some(chosen);
            }
            return;
        }
        if size + self.packing_bound(undominated) >= self.best {
            return;
        }
        // The first undominated vertex needs a dominator from its closed
        // neighbourhood; try the ones covering the most new vertices first.
        let v = undominated.trailing_zeros() as usize;
        let mut options: Vec<usize> = bits(self.g.closed[v]).collect();
        options.sort_by_key(|&u| std::cmp::Reverse((self.g.closed[u] & undominated).count_ones()));
        for u in options {
            self.run(chosen | 1 << u, dominated | self.g.closed[u], size + 1);
        }
    }
}

/// How the fixpoint removes unsafe configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EliminationOrder {
    /// Every round reads a snapshot and deletes in bulk; data-parallel.
    #[default]
    Rounds,
    /// In-place sweeps in increasing configuration order.
    Forward,
    /// In-place sweeps in decreasing configuration order.
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub cap: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub order: EliminationOrder,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { cap: DEFAULT_CAP, threads: None, order: EliminationOrder::Rounds }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SafeSetResult {
    pub k: u32,
    /// Dominating `k`-configurations, the fixpoint's starting set.
    pub dominating_count: u64,
    pub safe_count: u64,
    pub witness: Option<Vec<Cell>>,
    pub iterations: u32,
}

/// Safe configurations as sorted masks, plus the number of rounds or sweeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafeSet {
    pub k: u32,
    pub dominating_count: u64,
    pub safe: Vec<u128>,
    pub iterations: u32,
}

pub fn eternal_safe_set(g: &SmallGraph, k: u32, opts: &SolverOptions) -> Result<SafeSetResult, Error> {
    let set = safe_configurations(g, k, opts)?;
    Ok(SafeSetResult {
        k,
        dominating_count: set.dominating_count,
        safe_count: set.safe.len() as u64,
        witness: set.safe.first().map(|&w| g.cells(w)),
        iterations: set.iterations,
    })
}

pub fn safe_configurations(g: &SmallGraph, k: u32, opts: &SolverOptions) -> Result<SafeSet, Error> {
    let total = binomial(g.order() as u64, k as u64);
    if total > opts.cap {
        return Err(Error::ExceedsLimit(format!(
            "C({}, {k}) = {total} configurations exceeds the cap of {}",
            g.order(),
            opts.cap
        )));
    }
    match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(|| Ok(fixpoint(g, k, opts.order))),
        None => Ok(fixpoint(g, k, opts.order)),
    }
}

fn fixpoint(g: &SmallGraph, k: u32, order: EliminationOrder) -> SafeSet {
    let configs: Vec<u128> = k_subsets(g.order(), k as usize).filter(|&s| g.is_dominating(s)).collect();
    let succ: Vec<Vec<u32>> = configs.par_iter().map(|&c| successors(g, c, &configs)).collect();
    let full = g.full();
    // safe iff every unguarded vertex lies in some live successor
    let holds = |i: usize, alive: &[bool]| -> bool {
        let cover = succ[i].iter().filter(|&&j| alive[j as usize]).fold(0u128, |a, &j| a | configs[j as usize]);
        full & !configs[i] & !cover == 0
    };

    let mut alive = vec![true; configs.len()];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let changed = match order {
            EliminationOrder::Rounds => {
                let next: Vec<bool> =
                    (0..configs.len()).into_par_iter().map(|i| alive[i] && holds(i, &alive)).collect();
                let changed = next != alive;
                alive = next;
                changed
            }
            EliminationOrder::Forward | EliminationOrder::Reverse => {
                let mut changed = false;
                let idx: Box<dyn Iterator<Item = usize>> = if order == EliminationOrder::Forward {
                    Box::new(0..configs.len())
                } else {
                    Box::new((0..configs.len()).rev())
                };
                for i in idx {
                    if alive[i] && !holds(i, &alive) {
                        alive[i] = false;
                        changed = true;
                    }
                }
                changed
            }
        };
        if !changed {
            break;
        }
    }
    SafeSet {
        k,
        dominating_count: configs.len() as u64,
        safe: configs.iter().zip(&alive).filter(|(_, &a)| a).map(|(&c, _)| c).collect(),
        iterations,
    }
}

/// Indices into `configs` of every configuration reachable from `c` in one
/// round, `c` itself included.
fn successors(g: &SmallGraph, c: u128, configs: &[u128]) -> Vec<u32> {
    let guards: Vec<usize> = bits(c).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u128)];
    while let Some((i, used)) = stack.pop() {
        if i == guards.len() {
            if seen.insert(used) {
                if let Ok(j) = configs.binary_search(&used) {
                    out.push(j as u32);
                }
            }
            continue;
        }
        for t in bits(g.closed[guards[i]] & !used) {
            stack.push((i + 1, used | 1 << t));
        }
    }
    debug_assert!(out.iter().all(|&j| bitset_perfect_matching(c, configs[j as usize], &g.closed)));
    out.sort_unstable();
    out
}

/// Outcome of [`gamma_infinity`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaInfinity {
    pub graph: String,
    pub gamma: u32,
    pub gamma_infinity: u32,
    /// One entry per `k` tried, from 1 up to the answer.
    pub per_k: Vec<SafeSetResult>,
}

/// Smallest `k <= kmax` with a non-empty safe set.
pub fn gamma_infinity(g: &SmallGraph, kmax: u32, opts: &SolverOptions) -> Result<GammaInfinity, Error> {
    let gamma = gamma(g, kmax)?.gamma;
    let mut per_k = Vec::new();
    for k in 1..=kmax.min(g.order() as u32) {
        let r = eternal_safe_set(g, k, opts)?;
        let found = r.safe_count > 0;
        per_k.push(r);
        if found {
            if k < gamma {
                return Err(Error::Internal(format!("safe set with {k} guards below gamma = {gamma}")));
            }
            return Ok(GammaInfinity { graph: g.label(), gamma, gamma_infinity: k, per_k });
        }
    }
    Err(Error::NotFound(kmax))
}

/// `safe_count(k) > 0` implies `safe_count(k+1) > 0` for `k` in `ks`.
pub fn check_monotone(g: &SmallGraph, ks: std::ops::RangeInclusive<u32>, opts: &SolverOptions) -> Result<bool, Error> {
    let counts = ks.map(|k| eternal_safe_set(g, k, opts).map(|r| r.safe_count)).collect::<Result<Vec<_>, _>>()?;
    Ok(counts.windows(2).all(|w| w[0] == 0 || w[1] > 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{is_dominating, transition_exists};
    use crate::pattern::{chang_bound, chang_dominating_set};

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn subsets_in_order() {
        let all: Vec<u128> = k_subsets(5, 2).collect();
        assert_eq!(all.len() as u64, binomial(5, 2));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(k_subsets(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(k_subsets(3, 4).count(), 0);
        assert_eq!(k_subsets(4, 4).collect::<Vec<_>>(), vec![0b1111]);
        // oracle: Python math.comb(49, 21)
        assert_eq!(binomial(49, 21), 39_049_918_716_424);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("path:5".parse::<GraphSpec>().unwrap(), GraphSpec::Path(5));
        assert_eq!("grid:3x4".parse::<GraphSpec>().unwrap(), GraphSpec::Grid(3, 4));
        assert!("grid:3".parse::<GraphSpec>().is_err());
        assert!("tree:3".parse::<GraphSpec>().is_err());
        assert_eq!(GraphSpec::Grid(3, 4).to_string(), "grid:3x4");
    }

    #[test]
    fn small_gammas() {
        let p5 = SmallGraph::path(5).unwrap();
        let r = gamma(&p5, 5).unwrap();
        assert_eq!(r.gamma, 2);
        assert!(p5.is_dominating(r.witness));
        assert_eq!(gamma(&SmallGraph::grid(3, 3).unwrap(), 9).unwrap().gamma, 3);
        assert_eq!(gamma(&p5, 1).unwrap_err().code(), "NOT_FOUND");
        assert_eq!(gamma(&SmallGraph::grid(11, 11).unwrap(), 40).unwrap_err().code(), "EXCEEDS_LIMIT");
    }

    #[test]
    fn branch_and_bound_agrees_with_enumeration() {
        for (m, n) in [(1, 7), (2, 5), (3, 3), (3, 4), (4, 4), (2, 8), (4, 5)] {
            let g = SmallGraph::grid(m, n).unwrap();
            let a = gamma_with(&g, 20, GammaMethod::Exhaustive).unwrap();
            let b = gamma_with(&g, 20, GammaMethod::BranchAndBound).unwrap();
            assert_eq!(a.gamma, b.gamma, "{m}x{n}");
            assert!(g.is_dominating(b.witness));
        }
    }

    #[test]
    fn gamma_8x8_within_chang_bound() {
        let g = SmallGraph::grid(8, 8).unwrap();
        let r = gamma(&g, 20).unwrap();
        let construction = chang_dominating_set(8, 8).unwrap();
        assert!(is_dominating(&construction));
        assert_eq!(construction.len() as u64, chang_bound(8, 8));
        assert!(r.gamma as u64 <= chang_bound(8, 8));
        assert!(is_dominating(&g.placement(r.witness)));
    }

    #[test]
    fn path_ground_truth() {
        let p5 = SmallGraph::path(5).unwrap();
        assert_eq!(eternal_safe_set(&p5, 2, &opts()).unwrap().safe_count, 0);
        assert!(eternal_safe_set(&p5, 3, &opts()).unwrap().safe_count > 0);
        let p2 = SmallGraph::path(2).unwrap();
        let r = eternal_safe_set(&p2, 1, &opts()).unwrap();
        assert_eq!(r.safe_count, 2);
        assert_eq!(gamma_infinity(&p5, 10, &opts()).unwrap().gamma_infinity, 3);
        assert_eq!(gamma_infinity(&p2, 10, &opts()).unwrap().gamma_infinity, 1);
    }

    #[test]
    fn witness_is_consistent() {
        let p5 = SmallGraph::path(5).unwrap();
        let r = eternal_safe_set(&p5, 3, &opts()).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.len(), 3);
        let none = eternal_safe_set(&p5, 2, &opts()).unwrap();
        assert!(none.witness.is_none());
    }

    /// Independent check of closure: every safe configuration answers every
    /// attack with another safe configuration, found through the
    /// placement-level transition oracle.
    #[test]
    fn safe_set_is_closed() {
        for (m, n, k) in [(1, 5, 3), (3, 3, 4), (2, 4, 3)] {
            let g = SmallGraph::grid(m, n).unwrap();
            let set = safe_configurations(&g, k, &opts()).unwrap();
            let placements: Vec<GuardPlacement> = set.safe.iter().map(|&s| g.placement(s)).collect();
            for p in &placements {
                for a in g.dims.cells().filter(|&c| !p.contains(c)) {
                    assert!(placements.iter().any(|q| transition_exists(p, a, q)), "{m}x{n} k={k}");
                }
            }
        }
    }

    /// Plain fixpoint over placements, attack by attack, using the
    /// placement-level transition oracle instead of successor lists.
    fn naive_safe(g: &SmallGraph, k: u32) -> Vec<u128> {
        let configs: Vec<u128> = k_subsets(g.order(), k as usize).filter(|&s| g.is_dominating(s)).collect();
        let mut alive: Vec<u128> = configs.clone();
        loop {
            let keep: Vec<u128> = alive
                .iter()
                .copied()
                .filter(|&c| {
                    let p = g.placement(c);
                    g.dims.cells().filter(|&a| !p.contains(a)).all(|a| {
                        alive.iter().any(|&d| transition_exists(&p, a, &g.placement(d)))
                    })
                })
                .collect();
            if keep.len() == alive.len() {
                return keep;
            }
            alive = keep;
        }
    }

    #[test]
    fn matches_naive_fixpoint() {
        for (m, n, k) in [(1, 5, 2), (1, 5, 3), (3, 3, 2), (3, 3, 3), (2, 6, 4), (3, 5, 4), (2, 4, 3)] {
            let g = SmallGraph::grid(m, n).unwrap();
            assert_eq!(safe_configurations(&g, k, &opts()).unwrap().safe, naive_safe(&g, k), "{m}x{n} k={k}");
        }
    }

    /// (m, n, k, dominating configurations, safe configurations), from an
    /// independent Python brute force (all bijections, attack by attack).
    const GOLDENS: [(u32, u32, u32, u64, u64); 12] = [
        (1, 5, 2, 3, 0),
        (1, 5, 3, 8, 8),
        (1, 2, 1, 2, 2),
        (3, 3, 2, 0, 0),
        (3, 3, 3, 10, 10),
        (2, 6, 3, 0, 0),
        (2, 6, 4, 17, 9),
        (3, 4, 3, 0, 0),
        (3, 4, 4, 29, 29),
        (3, 5, 4, 1, 0),
        (3, 5, 5, 83, 83),
        (4, 4, 5, 40, 0),
    ];

    #[test]
    fn goldens() {
        for (m, n, k, dominating, safe) in GOLDENS {
            let r = eternal_safe_set(&SmallGraph::grid(m, n).unwrap(), k, &opts()).unwrap();
            assert_eq!((r.dominating_count, r.safe_count), (dominating, safe), "{m}x{n} k={k}");
        }
        let g33 = gamma_infinity(&SmallGraph::grid(3, 3).unwrap(), 9, &opts()).unwrap();
        assert_eq!((g33.gamma, g33.gamma_infinity), (3, 3));
    }

    #[test]
    fn orders_and_threads_agree() {
        for (m, n, k) in [(1, 6, 3), (3, 3, 3), (3, 3, 4), (2, 5, 4), (3, 4, 4)] {
            let g = SmallGraph::grid(m, n).unwrap();
            let base = safe_configurations(&g, k, &opts()).unwrap();
            for order in [EliminationOrder::Forward, EliminationOrder::Reverse] {
                let other = safe_configurations(&g, k, &SolverOptions { order, ..opts() }).unwrap();
                assert_eq!(other.safe, base.safe);
            }
            for threads in [1, 4] {
                let other = safe_configurations(&g, k, &SolverOptions { threads: Some(threads), ..opts() }).unwrap();
                assert_eq!(other, base);
            }
        }
    }

    #[test]
    fn monotone_on_small_grids() {
        for (m, n) in [(1, 5), (3, 3), (2, 4)] {
            let g = SmallGraph::grid(m, n).unwrap();
            assert!(check_monotone(&g, 1..=g.order() as u32, &opts()).unwrap());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = SmallGraph::grid(7, 7).unwrap();
        let e = eternal_safe_set(&g, 21, &opts()).unwrap_err();
        assert_eq!(e.code(), "EXCEEDS_LIMIT");
        assert_eq!(default_kmax(GridDims::new(7, 7).unwrap()), 10 + 28);
    }
}
