//! JSONL game traces: one header line, then one line per round.
//!
//! Field tables live in `docs/trace.md`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::finite::{check_invariants, GameState, InvariantFlags, Variant};
use crate::grid::{Cell, GridDims, GuardPlacement, MovePlan};
use crate::pattern::LatticePlacement;

pub const SCHEMA_VERSION: u32 = 1;

/// Sorted guard cells plus a 64-bit content hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementDigest {
    pub cells: Vec<Cell>,
    /// First 8 bytes of SHA-256 over the cells as big-endian `i32` pairs,
    /// as 16 lowercase hex digits.
    pub hash: String,
}

impl PlacementDigest {
    pub fn new(p: &GuardPlacement) -> Self {
        let cells: Vec<Cell> = p.cells().iter().copied().collect();
        let hash = content_hash(&cells);
        PlacementDigest { cells, hash }
    }

    pub fn is_consistent(&self) -> bool {
        self.cells.windows(2).all(|w| w[0] < w[1]) && self.hash == content_hash(&self.cells)
    }
}

pub fn content_hash(sorted: &[Cell]) -> String {
    let mut h = Sha256::new();
    for c in sorted {
        h.update(c.row.to_be_bytes());
        h.update(c.col.to_be_bytes());
    }
    let out = h.finalize();
    let word = u64::from_be_bytes(out[..8].try_into().expect("sha256 yields 32 bytes"));
    format!("{word:016x}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub schema_version: u32,
    pub variant: Variant,
    pub dims: GridDims,
    /// Free-form description of the attacker, e.g. `random(seed=7)`.
    pub attacker: String,
    pub initial: PlacementDigest,
    pub pattern: LatticePlacement,
}

impl TraceHeader {
    pub fn new(state: &GameState, attacker: impl Into<String>) -> Self {
        TraceHeader {
            schema_version: SCHEMA_VERSION,
            variant: state.variant,
            dims: state.dims,
            attacker: attacker.into(),
            initial: PlacementDigest::new(&state.placement),
            pattern: state.interior_pattern,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub schema_version: u32,
    pub round: u64,
    pub attack: Cell,
    pub plan: MovePlan,
    pub placement_after: PlacementDigest,
    pub pattern_after: LatticePlacement,
    pub invariant_flags: InvariantFlags,
}

impl TraceRecord {
    /// Record for the round that produced `after`.
    pub fn new(after: &GameState, attack: Cell, plan: MovePlan) -> Self {
        TraceRecord {
            schema_version: SCHEMA_VERSION,
            round: after.round,
            attack,
            plan,
            placement_after: PlacementDigest::new(&after.placement),
            pattern_after: after.interior_pattern,
            invariant_flags: check_invariants(after),
        }
    }

    /// Self-consistency plus continuity with the previous placement.
    pub fn validate(&self, before: &[Cell]) -> Result<(), Error> {
        let bad = |why: String| Err(Error::InvariantViolation(format!("trace round {}: {why}", self.round)));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("schema version {}", self.schema_version));
        }
        if !self.placement_after.is_consistent() {
            return bad("placement hash does not match its cells".into());
        }
        let sources: Vec<Cell> = self.plan.pairs().iter().map(|p| p.0).collect();
        if sources != before {
            return bad("plan does not start from the previous placement".into());
        }
        let targets: Vec<Cell> = self.plan.targets().into_iter().collect();
        if targets.len() != self.plan.len() || targets != self.placement_after.cells {
            return bad("plan targets differ from the recorded placement".into());
        }
        if self.plan.moves().any(|&(a, b)| a.distance(b) > 1) {
            return bad("a guard moves more than one step".into());
        }
        if before.binary_search(&self.attack).is_ok() || self.placement_after.cells.binary_search(&self.attack).is_err() {
            return bad(format!("attack {} is not answered", self.attack));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TraceLine {
    Header(TraceHeader),
    Round(TraceRecord),
}

pub struct TraceWriter<W: Write> {
    out: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(mut out: W, header: &TraceHeader) -> std::io::Result<Self> {
        write_line(&mut out, &TraceLine::Header(header.clone()))?;
        Ok(TraceWriter { out })
    }

    pub fn record(&mut self, r: &TraceRecord) -> std::io::Result<()> {
        write_line(&mut self.out, &TraceLine::Round(r.clone()))
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

fn write_line<W: Write>(out: &mut W, line: &TraceLine) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, line)?;
    out.write_all(b"\n")
}

/// Parses a trace and validates every record against its predecessor.
pub fn read_trace(input: impl BufRead) -> Result<(TraceHeader, Vec<TraceRecord>), Error> {
    let mut lines = input.lines().enumerate();
    let parse = |no: usize, text: std::io::Result<String>| -> Result<TraceLine, Error> {
        let text = text.map_err(|e| Error::Internal(format!("trace line {}: {e}", no + 1)))?;
        serde_json::from_str(&text).map_err(|e| Error::InvariantViolation(format!("trace line {}: {e}", no + 1)))
    };
    let header = match lines.next().map(|(no, t)| parse(no, t)).transpose()? {
        Some(TraceLine::Header(h)) => h,
        _ => return Err(Error::InvariantViolation("trace does not start with a header".into())),
    };
    if header.schema_version != SCHEMA_VERSION || !header.initial.is_consistent() {
        return Err(Error::InvariantViolation("bad trace header".into()));
    }
    let mut before = header.initial.cells.clone();
    let mut records = Vec::new();
    for (no, text) in lines {
        let TraceLine::Round(r) = parse(no, text)? else {
            return Err(Error::InvariantViolation(format!("trace line {}: second header", no + 1)));
        };
        if r.round != records.len() as u64 + 1 {
            return Err(Error::InvariantViolation(format!("trace line {}: round {} out of order", no + 1, r.round)));
        }
        r.validate(&before)?;
        before = r.placement_after.cells.clone();
        records.push(r);
    }
    Ok((header, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{init, step};

    fn short_game() -> (TraceHeader, Vec<TraceRecord>) {
        let mut s = init(Variant::Improved, 7, 7).unwrap();
        let header = TraceHeader::new(&s, "first free cell");
        let mut records = Vec::new();
        for _ in 0..5 {
            let a = s.dims.cells().find(|&c| !s.placement.contains(c)).unwrap();
            let (next, plan) = step(&s, a).unwrap();
            records.push(TraceRecord::new(&next, a, plan));
            s = next;
        }
        (header, records)
    }

    fn write(header: &TraceHeader, records: &[TraceRecord]) -> Vec<u8> {
        let mut w = TraceWriter::new(Vec::new(), header).unwrap();
        for r in records {
            w.record(r).unwrap();
        }
        w.finish().unwrap()
    }

    #[test]
    fn hash_is_pure_and_order_sensitive() {
        let a = [Cell::new(0, 1), Cell::new(2, 3)];
        assert_eq!(content_hash(&a), content_hash(&a));
        assert_eq!(content_hash(&a).len(), 16);
        assert_ne!(content_hash(&a), content_hash(&[Cell::new(0, 1), Cell::new(3, 2)]));
        // oracle: hashlib.sha256(b"").hexdigest()[:16]
        assert_eq!(content_hash(&[]), "e3b0c44298fc1c14");
    }

    #[test]
    fn round_trip() {
        let (header, records) = short_game();
        let bytes = write(&header, &records);
        assert_eq!(bytes.iter().filter(|&&b| b == b'\n').count(), 6);
        let (h2, r2) = read_trace(&bytes[..]).unwrap();
        assert_eq!(h2, header);
        assert_eq!(r2, records);
        assert!(r2.iter().all(|r| r.invariant_flags.all()));
    }

    #[test]
    fn tampering_is_detected() {
        let (header, mut records) = short_game();
        records[2].placement_after.hash = "0000000000000000".into();
        assert!(read_trace(&write(&header, &records)[..]).is_err());

        let (header, mut records) = short_game();
        records.swap(1, 2);
        assert!(read_trace(&write(&header, &records)[..]).is_err());

        let (header, mut records) = short_game();
        let cells = &mut records[0].placement_after.cells;
        cells.pop();
        records[0].placement_after.hash = content_hash(cells);
        assert!(read_trace(&write(&header, &records)[..]).is_err());

        assert!(read_trace(&b"{\"type\":\"round\"}\n"[..]).is_err());
    }
}
