use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::thread;

use eg_service::{spawn, Reply, Request};
use eternal_domination::finite::{self, Variant};
use eternal_domination::grid::Cell;
use proptest::prelude::*;

struct Client {
    out: TcpStream,
    input: BufReader<TcpStream>,
}

impl Client {
    fn connect(addr: std::net::SocketAddr) -> Self {
        let out = TcpStream::connect(addr).unwrap();
        let input = BufReader::new(out.try_clone().unwrap());
        Client { out, input }
    }

    fn raw(&mut self, line: &str) -> Reply {
        self.out.write_all(line.as_bytes()).unwrap();
        self.out.write_all(b"\n").unwrap();
        let mut reply = String::new();
        self.input.read_line(&mut reply).unwrap();
        assert!(reply.ends_with('\n'));
        serde_json::from_str(&reply).unwrap()
    }

    fn send(&mut self, req: &Request) -> Reply {
        self.raw(&serde_json::to_string(req).unwrap())
    }
}

fn new_session(c: &mut Client, m: u32, n: u32, variant: Variant) -> String {
    match c.send(&Request::NewSession { m, n, variant }) {
        Reply::SessionCreated { id, .. } => id,
        other => panic!("{other:?}"),
    }
}

#[test]
fn game_over_tcp() {
    let (addr, _) = spawn("127.0.0.1:0").unwrap();
    let mut c = Client::connect(addr);
    let id = match c.raw(r#"{"type":"NEW_SESSION","m":7,"n":7,"variant":"improved"}"#) {
        Reply::SessionCreated { id, state } => {
            assert_eq!(state.guards.len(), 21);
            id
        }
        other => panic!("{other:?}"),
    };
    let hint = match c.send(&Request::Hint { id: id.clone() }) {
        Reply::HintReport { cell, .. } => cell,
        other => panic!("{other:?}"),
    };
    match c.send(&Request::Attack { id: id.clone(), cell: hint }) {
        Reply::MoveReport { invariant_flags, state, .. } => {
            assert!(invariant_flags.all());
            assert_eq!(state.round, 1);
        }
        other => panic!("{other:?}"),
    }
    // garbage does not kill the connection
    assert!(matches!(c.raw("{oops"), Reply::ProtocolError { .. }));
    assert!(matches!(c.send(&Request::Close { id: id.clone() }), Reply::Closed { .. }));
}

#[test]
fn sessions_resume_across_connections() {
    let (addr, _) = spawn("127.0.0.1:0").unwrap();
    let mut a = Client::connect(addr);
    let id = new_session(&mut a, 12, 12, Variant::FullBoundary);
    drop(a);
    let mut b = Client::connect(addr);
    assert!(matches!(b.send(&Request::Hint { id }), Reply::HintReport { .. }));
}

#[test]
fn concurrent_sessions_match_direct_play() {
    let (addr, registry) = spawn("127.0.0.1:0").unwrap();
    let handles: Vec<_> = (0..6u32)
        .map(|k| {
            thread::spawn(move || {
                let variant = if k % 2 == 0 { Variant::Improved } else { Variant::FullBoundary };
                let mut c = Client::connect(addr);
                let id = new_session(&mut c, 12, 12, variant);
                let mut direct = finite::init(variant, 12, 12).unwrap();
                for _ in 0..40 {
                    let Reply::HintReport { cell, .. } = c.send(&Request::Hint { id: id.clone() }) else {
                        panic!("no hint")
                    };
                    let Reply::MoveReport { state, plan, .. } = c.send(&Request::Attack { id: id.clone(), cell }) else {
                        panic!("no move")
                    };
                    let (next, direct_plan) = finite::step(&direct, cell).unwrap();
                    assert_eq!(plan, direct_plan);
                    assert_eq!(state.guards, next.placement.cells().iter().copied().collect::<Vec<_>>());
                    direct = next;
                }
                id
            })
        })
        .collect();
    for h in handles {
        let id = h.join().unwrap();
        assert_eq!(registry.inspect(&id).unwrap().1.len(), 40);
    }
}

fn cell_strategy() -> impl Strategy<Value = (i32, i32)> {
    (-1..13i32, -1..13i32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The service adds no behaviour: any message sequence leaves the
    /// session where direct play of the accepted attacks leaves it.
    #[test]
    fn replay_equivalence(variant_full in any::<bool>(), script in prop::collection::vec((cell_strategy(), 0u8..8), 1..40)) {
        let variant = if variant_full { Variant::FullBoundary } else { Variant::Improved };
        let registry = eg_service::Registry::new();
        let Reply::SessionCreated { id, .. } = registry.handle(Request::NewSession { m: 12, n: 12, variant }) else {
            panic!("create")
        };
        let mut stack = vec![finite::init(variant, 12, 12).unwrap()];
        for ((r, c), op) in script {
            let cur = stack.last().unwrap().clone();
            if op == 0 {
                let reply = registry.handle(Request::Undo { id: id.clone() });
                if stack.len() > 1 {
                    stack.pop();
                    prop_assert!(matches!(reply, Reply::Undone { .. }), "{:?}", reply);
                } else {
                    prop_assert!(matches!(reply, Reply::Rejected { .. }), "{:?}", reply);
                }
                continue;
            }
            let cell = Cell::new(r, c);
            let reply = registry.handle(Request::Attack { id: id.clone(), cell });
            match finite::step(&cur, cell) {
                Ok((next, _)) => {
                    prop_assert!(matches!(reply, Reply::MoveReport { .. }), "{:?}", reply);
                    stack.push(next);
                }
                Err(_) => prop_assert!(matches!(reply, Reply::Rejected { .. }), "{:?}", reply),
            }
            let (state, _) = registry.inspect(&id).unwrap();
            prop_assert_eq!(&state, stack.last().unwrap());
        }
    }

    /// UNDO followed by the same attack reproduces the report exactly.
    #[test]
    fn undo_then_replay_is_identical(r in 0..7i32, c in 0..7i32) {
        let registry = eg_service::Registry::new();
        let Reply::SessionCreated { id, state } = registry.handle(Request::NewSession { m: 7, n: 7, variant: Variant::Improved }) else {
            panic!("create")
        };
        let cell = Cell::new(r, c);
        prop_assume!(!state.guards.contains(&cell));
        let first = registry.handle(Request::Attack { id: id.clone(), cell });
        registry.handle(Request::Undo { id: id.clone() });
        let second = registry.handle(Request::Attack { id: id.clone(), cell });
        prop_assert_eq!(first, second);
    }
}
