//! The eight published Rotate-Square transition tables, transcribed as
//! printed, and their reconciliation against the computed steps.
//!
//! Offsets are relative to the responsible guard `(x, y)`. The third column
//! of each table is kept as the printed string; [`reconcile`] parses it and
//! compares it with the residue of the new position under the successor
//! family.

use std::fmt;

use serde::Serialize;

use crate::grid::{Cell, Window};
use crate::infinite::{rotate_square_step, step_report};
use crate::pattern::{f_value, LatticePlacement, PatternFamily, Residue};

#[derive(Debug, Clone, Copy)]
pub struct PublishedRow {
    pub old: (i32, i32),
    pub new: (i32, i32),
    pub printed: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct PublishedTable {
    pub number: u8,
    pub family: PatternFamily,
    pub attack: (i32, i32),
    pub pattern_square: u8,
    /// Four rotation rows then the still guard.
    pub rows: [PublishedRow; 5],
}

const fn row(old: (i32, i32), new: (i32, i32), printed: &'static str) -> PublishedRow {
    PublishedRow { old, new, printed }
}

use PatternFamily::{Straight, Transposed};

pub const PUBLISHED: [PublishedTable; 8] = [
    PublishedTable {
        number: 1,
        family: Straight,
        attack: (-1, 0),
        pattern_square: 0,
        rows: [
            row((0, 0), (-1, 0), "2x + y - 2"),
            row((-2, 1), (-2, 2), "2x + y - 2"),
            row((-1, 3), (0, 3), "2x + y + 3"),
            row((1, 2), (1, 1), "2x + y + 3"),
            row((-3, -1), (-3, -1), "2x + y - 2"),
        ],
    },
    PublishedTable {
        number: 2,
        family: Straight,
        attack: (0, -1),
        pattern_square: 3,
        rows: [
            row((0, 0), (0, -1), "2x + y - 1"),
            row((-1, -2), (-2, -2), "2x + y - 1"),
            row((-3, -1), (-3, 0), "2x + y - 1"),
            row((-2, 1), (-1, 1), "2x + y - 1"),
            row((1, 2), (1, 2), "2x + y + 4"),
        ],
    },
    PublishedTable {
        number: 3,
        family: Straight,
        attack: (1, 0),
        pattern_square: 2,
        rows: [
            row((0, 0), (1, 0), "2x + y + 2"),
            row((2, -1), (2, -2), "2x + y + 2"),
            row((1, -3), (0, -3), "2x + y - 3"),
            row((-1, -2), (-1, -1), "2x + y - 3"),
            row((-2, 1), (-2, 1), "2x + y - 3"),
        ],
    },
    PublishedTable {
        number: 4,
        family: Straight,
        attack: (0, 1),
        pattern_square: 1,
        rows: [
            row((0, 0), (0, 1), "2x + y + 1"),
            row((1, 2), (2, 2), "2x + y + 1"),
            row((3, 1), (3, 0), "2x + y + 1"),
            row((2, -1), (1, -1), "2x + y + 1"),
            row((-1, 3), (-1, 3), "2x + y + 1"),
        ],
    },
    PublishedTable {
        number: 5,
        family: Transposed,
        attack: (-1, 0),
        pattern_square: 2,
        rows: [
            row((0, 0), (-1, 0), "x + 2y - 1"),
            row((-2, -1), (-2, -2), "x + 2y - 1"),
            row((-1, -3), (0, -3), "x + 2y -1"),
            row((1, -2), (1, -1), "x + 2y -1 "),
            row((-3, 1), (-3, 1), "x + 2y - 1"),
        ],
    },
    PublishedTable {
        number: 6,
        family: Transposed,
        attack: (0, -1),
        pattern_square: 1,
        rows: [
            row((0, 0), (0, -1), "x + 2y - 2"),
            row((2, 1), (1, 1), "x + 2y + 3"),
            row((3, -1), (3, 0), "x + 2y + 3"),
            row((1, -2), (2, -2), "x + 2y - 2"),
            row((-1, 2), (-1, 2), "x + 2y + 3"),
        ],
    },
    PublishedTable {
        number: 7,
        family: Transposed,
        attack: (1, 0),
        pattern_square: 0,
        rows: [
            row((0, 0), (1, 0), "x + 2y + 1"),
            row((2, 1), (2, 2), "x + 2y + 1"),
            row((1, 3), (0, 3), "x + y + 1"),
            row((-1, 2), (-1, 1), "x + 2y + 1"),
            row((-2, -1), (-2, -1), "x + 2y - 4"),
        ],
    },
    PublishedTable {
        number: 8,
        family: Transposed,
        attack: (0, 1),
        pattern_square: 3,
        rows: [
            row((0, 0), (0, 1), "x + 2y + 2"),
            row((-1, 2), (-2, 2), "x + 2y + 2"),
            row((-3, 1), (-3, 0), "x + 2y - 3"),
            row((-2, -1), (-1, -1), "x + 2y + -3"),
            row((1, 3), (1, 3), "x + 2y + 2"),
        ],
    },
];

/// `a*x + b*y + c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Linear {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for Linear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coef = |k: i64, v: &str| match k {
            1 => v.to_string(),
            _ => format!("{k}{v}"),
        };
        write!(f, "{} + {}", coef(self.a, "x"), coef(self.b, "y"))?;
        match self.c {
            0 => Ok(()),
            c if c < 0 => write!(f, " - {}", -c),
            c => write!(f, " + {c}"),
        }
    }
}

/// Parses the printed form, accepting `+ -k` as `- k`.
pub fn parse_linear(s: &str) -> Option<Linear> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let compact = compact.replace("+-", "-");
    let mut out = Linear { a: 0, b: 0, c: 0 };
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        if let Some(k) = term.strip_suffix('x') {
            out.a += sign * if k.is_empty() { 1 } else { k.parse::<i64>().ok()? };
        } else if let Some(k) = term.strip_suffix('y') {
            out.b += sign * if k.is_empty() { 1 } else { k.parse::<i64>().ok()? };
        } else {
            out.c += sign * term.parse::<i64>().ok()?;
        }
    }
    Some(out)
}

/// Residue of guard `(x,y) + (dr,dc)` under `family`, as a linear form.
pub fn computed_form(family: PatternFamily, (dr, dc): (i32, i32)) -> Linear {
    match family {
        PatternFamily::Straight => Linear {
            a: 1,
            b: 2,
            c: (dr + 2 * dc) as i64,
        },
        PatternFamily::Transposed => Linear {
            a: 2,
            b: 1,
            c: (2 * dr + dc) as i64,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Consistent,
    /// Same value mod 5, odd sign formatting in print.
    Formatting,
    /// The printed form disagrees with the new position.
    Typo,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowCheck {
    pub row: usize,
    pub printed: &'static str,
    pub computed: String,
    pub status: RowStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableCheck {
    pub table: u8,
    pub family: PatternFamily,
    pub attack: (i32, i32),
    /// Transcribed moves equal the computed step's moves.
    pub moves_match: bool,
    pub pattern_square_match: bool,
    /// Number of residues `t` for which the materialised step checks out.
    pub windows_ok: usize,
    pub rows: Vec<RowCheck>,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.moves_match && self.pattern_square_match && self.windows_ok == 5
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub tables: Vec<TableCheck>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.tables.iter().all(TableCheck::passed)
    }

    pub fn flagged(&self) -> impl Iterator<Item = (u8, &RowCheck)> {
        self.tables
            .iter()
            .flat_map(|t| t.rows.iter().map(move |r| (t.table, r)))
            .filter(|(_, r)| r.status != RowStatus::Consistent)
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tables {
            writeln!(
                f,
                "table {} {} attack {:?}: moves {} square {} windows {}/5",
                t.table,
                t.family.name(),
                t.attack,
                if t.moves_match { "ok" } else { "MISMATCH" },
                if t.pattern_square_match { "ok" } else { "MISMATCH" },
                t.windows_ok
            )?;
        }
        for (table, r) in self.flagged() {
            let what = match r.status {
                RowStatus::Typo => "typo",
                RowStatus::Formatting => "formatting",
                RowStatus::Consistent => unreachable!(),
            };
            writeln!(
                f,
                "reconciled table {table} row {}: printed \"{}\", computed {} ({what})",
                r.row + 1,
                r.printed.trim(),
                r.computed
            )?;
        }
        Ok(())
    }
}

fn same_mod5(p: Linear, q: Linear) -> bool {
    (p.a - q.a).rem_euclid(5) == 0 && (p.b - q.b).rem_euclid(5) == 0 && (p.c - q.c).rem_euclid(5) == 0
}

fn check_table(table: &PublishedTable, window_radius: i32) -> TableCheck {
    let successor = table.family.flipped();
    let rows = table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let computed = computed_form(successor, r.new);
            let status = match parse_linear(r.printed) {
                Some(p) if same_mod5(p, computed) && !r.printed.contains("+ -") => RowStatus::Consistent,
                Some(p) if same_mod5(p, computed) => RowStatus::Formatting,
                _ => RowStatus::Typo,
            };
            RowCheck {
                row: i,
                printed: r.printed,
                computed: Linear { c: computed.c.rem_euclid(5), ..computed }.to_string(),
                status,
            }
        })
        .collect();

    let g = Cell::new(0, 0);
    let lp = LatticePlacement {
        family: table.family,
        t: f_value(g, table.family),
    };
    let attack = Cell::from(table.attack);
    let (moves_match, pattern_square_match) = match rotate_square_step(lp, attack) {
        Ok(step) => {
            // The still guard may be listed as another member of its class.
            let same = table.rows.iter().all(|r| {
                step.displacement(Cell::from(r.old)) == Some((r.new.0 - r.old.0, r.new.1 - r.old.1))
            });
            (same, step.pattern_square.index == table.pattern_square)
        }
        Err(_) => (false, false),
    };

    // Shift the guard so that every residue is visited.
    let windows_ok = Residue::ALL
        .iter()
        .filter(|&&t| {
            let g = (0..5)
                .map(|r| Cell::new(r, 0))
                .find(|&c| f_value(c, table.family) == t)
                .expect("every residue occurs in a column of five");
            let lp = LatticePlacement { family: table.family, t };
            let attack = g.offset(table.attack.0, table.attack.1);
            step_report(lp, attack, Window::around(attack, window_radius)).is_ok()
        })
        .count();

    TableCheck {
        table: table.number,
        family: table.family,
        attack: table.attack,
        moves_match,
        pattern_square_match,
        windows_ok,
        rows,
    }
}

/// Checks all eight tables on windows of side `2 * window_radius + 1`.
pub fn reconcile(window_radius: i32) -> TableReport {
    TableReport {
        tables: PUBLISHED.iter().map(|t| check_table(t, window_radius)).collect(),
    }
}
