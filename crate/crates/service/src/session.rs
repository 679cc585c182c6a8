//! Sessions and the registry that owns them.

use std::collections::hash_map::RandomState;
use std::collections::HashMap;
use std::hash::BuildHasher;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{SystemTime, UNIX_EPOCH};

use eternal_domination::audit::greedy_attack;
use eternal_domination::finite::{self, GameState};
use eternal_domination::trace::TraceRecord;
use eternal_domination::Error;

use crate::protocol::{RejectReason, Reply, Request, Snapshot};

pub struct Session {
    pub id: String,
    pub state: GameState,
    /// Every round ever played, undone ones included.
    pub history: Vec<TraceRecord>,
    /// States before each live round, for `UNDO`.
    undo: Vec<GameState>,
    pub created_at: u64,
}

/// Concurrent map of sessions. Each session sits behind its own lock, so
/// messages for one session are serialised while others proceed.
#[derive(Default)]
pub struct Registry {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    counter: AtomicU64,
    salt: RandomState,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    // a panicking handler must not take the whole server down
    m.lock().unwrap_or_else(|e| e.into_inner())
}

fn reject(id: Option<&str>, reason: RejectReason, detail: impl Into<String>) -> Reply {
    Reply::Rejected { id: id.map(str::to_owned), reason, detail: detail.into() }
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        lock(&self.sessions).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn fresh_id(&self) -> String {
        let k = self.counter.fetch_add(1, Ordering::Relaxed);
        format!("{:016x}", self.salt.hash_one(k))
    }

    fn get(&self, id: &str) -> Option<Arc<Mutex<Session>>> {
        lock(&self.sessions).get(id).cloned()
    }

    /// Runs `f` on a session, or rejects with `NO_SESSION`.
    fn with_session(&self, id: &str, f: impl FnOnce(&mut Session) -> Reply) -> Reply {
        match self.get(id) {
            Some(s) => f(&mut lock(&s)),
            None => reject(Some(id), RejectReason::NoSession, format!("no session {id}")),
        }
    }

    pub fn handle(&self, req: Request) -> Reply {
        match req {
            Request::NewSession { m, n, variant } => match finite::init(variant, m, n) {
                Ok(state) => {
                    let id = self.fresh_id();
                    let reply = Reply::SessionCreated { id: id.clone(), state: Snapshot::of(&state) };
                    let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                    let session = Session { id: id.clone(), state, history: Vec::new(), undo: Vec::new(), created_at };
                    lock(&self.sessions).insert(id, Arc::new(Mutex::new(session)));
                    reply
                }
                Err(e) => reject(None, RejectReason::BadDimensions, e.to_string()),
            },
            Request::Attack { id, cell } => self.with_session(&id, |s| match finite::step(&s.state, cell) {
                Ok((next, plan)) => {
                    let record = TraceRecord::new(&next, cell, plan.clone());
                    let reply = Reply::MoveReport {
                        id: id.clone(),
                        attack: cell,
                        plan,
                        state: Snapshot::of(&next),
                        invariant_flags: record.invariant_flags,
                    };
                    s.history.push(record);
                    s.undo.push(std::mem::replace(&mut s.state, next));
                    reply
                }
                Err(e) => {
                    let reason = match e {
                        Error::AttackOnGuard(_) => RejectReason::AttackOnGuard,
                        Error::CellOutOfBounds(_) => RejectReason::OutOfBounds,
                        _ => RejectReason::StrategyFailure,
                    };
                    reject(Some(&id), reason, e.to_string())
                }
            }),
            Request::Undo { id } => self.with_session(&id, |s| match s.undo.pop() {
                Some(prev) => {
                    s.state = prev;
                    Reply::Undone { id: id.clone(), state: Snapshot::of(&s.state) }
                }
                None => reject(Some(&id), RejectReason::NothingToUndo, "session is at its initial state"),
            }),
            Request::Hint { id } => self.with_session(&id, |s| match greedy_attack(&s.state) {
                Some(cell) => Reply::HintReport { id: id.clone(), cell },
                None => reject(Some(&id), RejectReason::NoAttack, "every cell holds a guard"),
            }),
            Request::Close { id } => match lock(&self.sessions).remove(&id) {
                Some(_) => Reply::Closed { id },
                None => reject(Some(&id), RejectReason::NoSession, format!("no session {id}")),
            },
        }
    }

    /// Parses one line and handles it. Never panics on client input.
    pub fn handle_line(&self, line: &str) -> Reply {
        match Request::parse(line) {
            Ok(req) => self.handle(req),
            Err(e) => e.into(),
        }
    }

    /// Copy of a session's state and history.
    pub fn inspect(&self, id: &str) -> Option<(GameState, Vec<TraceRecord>)> {
        self.get(id).map(|s| {
            let s = lock(&s);
            (s.state.clone(), s.history.clone())
        })
    }
}
