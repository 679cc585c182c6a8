//! Sweeps shared by the command line and the acceptance suite.

use serde::Serialize;

use crate::finite::general;
use crate::grid::{dominates_region, is_dominating, is_perfect_on, Window};
use crate::infinite::verify_step_in_window;
use crate::pattern::{
    chang_bound, chang_dominating_set, count_restriction, materialize, materialize_grid, LatticePlacement, Residue,
};

#[derive(Debug, Clone, Serialize)]
pub struct LatticeCheck {
    pub placement: String,
    pub dominating: bool,
    pub perfect: bool,
}

/// Every lattice placement materialised on a `size x size` window dominates
/// and perfectly dominates the region `margin` cells inside it.
pub fn lattice_domination(size: i32, margin: i32) -> Vec<LatticeCheck> {
    let w = Window { row_lo: 0, row_hi: size - 1, col_lo: 0, col_hi: size - 1 };
    let inner = w.shrink(margin);
    LatticePlacement::all()
        .map(|lp| {
            let p = materialize(lp, w);
            LatticeCheck {
                placement: lp.to_string(),
                dominating: dominates_region(&p, &inner),
                perfect: is_perfect_on(&p, &inner),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CountingReport {
    pub grids: u64,
    /// `(m, n, family, t)` cases checked against the bounds.
    pub cases: u64,
    pub bound_failures: Vec<(u32, u32, String)>,
    /// Grids where no residue attains the floor or none attains the ceiling.
    pub extreme_failures: Vec<(u32, u32, String)>,
    /// Closed form differing from cell-by-cell enumeration.
    pub enumeration_failures: Vec<(u32, u32, String)>,
    pub enumerated: u64,
}

impl CountingReport {
    pub fn passed(&self) -> bool {
        self.bound_failures.is_empty() && self.extreme_failures.is_empty() && self.enumeration_failures.is_empty()
    }
}

/// Pattern counts on every grid up to `max x max`; closed form checked
/// against enumeration up to `enumerate_max`.
pub fn counting(max: u32, enumerate_max: u32) -> CountingReport {
    let mut r = CountingReport::default();
    for m in 1..=max {
        for n in 1..=max {
            r.grids += 1;
            let area = m as u64 * n as u64;
            let (lo, hi) = (area / 5, area.div_ceil(5));
            for family in [crate::pattern::PatternFamily::Straight, crate::pattern::PatternFamily::Transposed] {
                let counts: Vec<u64> = Residue::ALL.iter().map(|&t| count_restriction(m, n, t, family)).collect();
                r.cases += 5;
                for (t, &c) in counts.iter().enumerate() {
                    if c < lo || c > hi {
                        r.bound_failures.push((m, n, format!("{} t={t}: {c}", family.name())));
                    }
                    if m <= enumerate_max && n <= enumerate_max {
                        r.enumerated += 1;
                        let lp = LatticePlacement::new(family, t as u8);
                        let dims = crate::grid::GridDims::new(m, n).expect("positive sides");
                        let e = materialize_grid(lp, dims).len() as u64;
                        if e != c {
                            r.enumeration_failures.push((m, n, format!("{lp}: formula {c}, cells {e}")));
                        }
                    }
                }
                if !counts.contains(&lo) || !counts.contains(&hi) {
                    r.extreme_failures.push((m, n, format!("{}: {counts:?}", family.name())));
                }
            }
        }
    }
    r
}

#[derive(Debug, Clone, Serialize)]
pub struct ChangRow {
    pub m: u32,
    pub n: u32,
    pub size: usize,
    pub bound: u64,
    pub dominating: bool,
    pub error: Option<String>,
}

impl ChangRow {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.dominating && self.size as u64 == self.bound
    }
}

pub fn chang_sweep(lo: u32, hi: u32) -> Vec<ChangRow> {
    let mut rows = Vec::new();
    for m in lo..=hi {
        for n in lo..=hi {
            let bound = chang_bound(m, n);
            rows.push(match chang_dominating_set(m, n) {
                Ok(p) => ChangRow { m, n, size: p.len(), bound, dominating: is_dominating(&p), error: None },
                Err(e) => ChangRow { m, n, size: 0, bound, dominating: false, error: Some(e.to_string()) },
            });
        }
    }
    rows
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneralRow {
    pub m: u32,
    pub n: u32,
    pub guards: u64,
    pub chang: u64,
    /// `guards - chang`, which may be negative only in principle.
    pub excess: i64,
    /// `6 (m + n)`.
    pub allowance: i64,
    pub invariants: bool,
}

impl GeneralRow {
    pub fn passed(&self) -> bool {
        self.invariants && self.excess <= self.allowance
    }
}

pub fn general_sweep(lo: u32, hi: u32) -> Result<Vec<GeneralRow>, crate::Error> {
    let mut rows = Vec::new();
    for m in lo..=hi {
        for n in lo..=hi {
            let s = general::init(m, n)?;
            let guards = s.placement.len() as u64;
            let chang = chang_bound(m, n);
            rows.push(GeneralRow {
                m,
                n,
                guards,
                chang,
                excess: guards as i64 - chang as i64,
                allowance: 6 * (m + n) as i64,
                invariants: crate::finite::check_invariants(&s).all(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct StepSweep {
    pub cases: u64,
    pub failures: Vec<String>,
}

/// Every placement against every unguarded attack in a 5x5 block (which
/// covers all attack types up to translation), each checked on the window
/// of `radius` around the attack.
pub fn step_sweep(radius: i32) -> StepSweep {
    let mut r = StepSweep::default();
    for lp in LatticePlacement::all() {
        for attack in Window::around(crate::grid::Cell::new(0, 0), 2).cells().filter(|&c| !lp.contains(c)) {
            r.cases += 1;
            if !verify_step_in_window(lp, attack, Window::around(attack, radius)) {
                r.failures.push(format!("{lp} attack {attack}"));
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_checks() {
        let rows = lattice_domination(20, 2);
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.dominating && r.perfect));
        // margin 0 reaches the window edge, where domination breaks
        assert!(lattice_domination(20, 0).iter().any(|r| !r.dominating));
    }

    #[test]
    fn small_counting() {
        let r = counting(12, 12);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.grids, 144);
        assert_eq!(r.enumerated, 144 * 10);
    }

    #[test]
    fn step_sweep_covers_every_attack() {
        let r = step_sweep(10);
        // each placement holds 5 of the 25 cells
        assert_eq!(r.cases, 10 * 20);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn general_rows() {
        let rows = general_sweep(16, 18).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(GeneralRow::passed));
    }
}
