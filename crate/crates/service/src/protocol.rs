//! Wire messages. Every message is one JSON object on one line, tagged by
//! `"type"`. See `docs/protocol.md`.

use serde::{Deserialize, Serialize};

use eternal_domination::finite::{GameState, InvariantFlags, Variant};
use eternal_domination::grid::{Cell, MovePlan};
use eternal_domination::pattern::LatticePlacement;
use eternal_domination::trace::content_hash;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "SCREAMING_SNAKE_CASE", deny_unknown_fields)]
pub enum Request {
    NewSession { m: u32, n: u32, variant: Variant },
    Attack { id: String, cell: Cell },
    Undo { id: String },
    Hint { id: String },
    Close { id: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RejectReason {
    AttackOnGuard,
    OutOfBounds,
    NoSession,
    /// `NEW_SESSION` with dimensions the variant cannot play.
    BadDimensions,
    /// `UNDO` on a session that is back at its initial state.
    NothingToUndo,
    /// `HINT` when every cell holds a guard.
    NoAttack,
    /// The strategy could not answer; the session keeps its last good state.
    StrategyFailure,
}

/// What a client needs to draw the board.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub m: u32,
    pub n: u32,
    pub variant: Variant,
    pub round: u64,
    pub guards: Vec<Cell>,
    /// Content hash of `guards`, as in trace files.
    pub hash: String,
    pub pattern: LatticePlacement,
}

impl Snapshot {
    pub fn of(state: &GameState) -> Self {
        let guards: Vec<Cell> = state.placement.cells().iter().copied().collect();
        Snapshot {
            m: state.dims.m,
            n: state.dims.n,
            variant: state.variant,
            round: state.round,
            hash: content_hash(&guards),
            guards,
            pattern: state.interior_pattern,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reply {
    SessionCreated {
        id: String,
        state: Snapshot,
    },
    MoveReport {
        id: String,
        attack: Cell,
        plan: MovePlan,
        state: Snapshot,
        invariant_flags: InvariantFlags,
    },
    Rejected {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        id: Option<String>,
        reason: RejectReason,
        detail: String,
    },
    Undone {
        id: String,
        state: Snapshot,
    },
    HintReport {
        id: String,
        cell: Cell,
    },
    Closed {
        id: String,
    },
    ProtocolError {
        line: usize,
        column: usize,
        message: String,
    },
}

/// A message that could not be understood, with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

impl From<ParseError> for Reply {
    fn from(e: ParseError) -> Self {
        Reply::ProtocolError { line: e.line, column: e.column, message: e.message }
    }
}

// One shape per message kind. Deserializing these straight from the text,
// rather than through the tagged enum, keeps serde's error positions.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewSessionMsg {
    #[allow(dead_code)]
    r#type: String,
    m: u32,
    n: u32,
    variant: Variant,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AttackMsg {
    #[allow(dead_code)]
    r#type: String,
    id: String,
    cell: Cell,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdMsg {
    #[allow(dead_code)]
    r#type: String,
    id: String,
}

#[derive(Deserialize)]
struct Tag {
    r#type: Option<serde_json::Value>,
}

impl Request {
    pub fn parse(line: &str) -> Result<Request, ParseError> {
        let at_start = |message: String| ParseError { line: 1, column: 1, message };
        let tag: Tag = serde_json::from_str(line)?;
        let kind = match tag.r#type {
            Some(serde_json::Value::String(s)) => s,
            Some(other) => return Err(at_start(format!("\"type\" must be a string, got {other}"))),
            None => return Err(at_start("missing \"type\"".into())),
        };
        Ok(match kind.as_str() {
            "NEW_SESSION" => {
                let m: NewSessionMsg = serde_json::from_str(line)?;
                Request::NewSession { m: m.m, n: m.n, variant: m.variant }
            }
            "ATTACK" => {
                let m: AttackMsg = serde_json::from_str(line)?;
                Request::Attack { id: m.id, cell: m.cell }
            }
            "UNDO" | "HINT" | "CLOSE" => {
                let IdMsg { id, .. } = serde_json::from_str(line)?;
                match kind.as_str() {
                    "UNDO" => Request::Undo { id },
                    "HINT" => Request::Hint { id },
                    _ => Request::Close { id },
                }
            }
            other => return Err(at_start(format!("unknown message type {other:?}"))),
        })
    }
}
