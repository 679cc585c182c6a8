//! Session server for playing the attacker against the finite strategies.
//!
//! Transport is TCP with one JSON message per line in each direction. Each
//! connection gets a thread; the registry is shared, so a session created
//! on one connection can be resumed from another.

pub mod protocol;
pub mod session;

use std::io::{self, BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::Arc;
use std::thread;

pub use protocol::{RejectReason, Reply, Request, Snapshot};
pub use session::Registry;

pub const DEFAULT_PORT: u16 = 7575;

/// Serves one connection until the peer hangs up.
pub fn serve_connection(registry: &Registry, stream: TcpStream) -> io::Result<()> {
    let mut out = stream.try_clone()?;
    for line in BufReader::new(stream).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = registry.handle_line(&line);
        serde_json::to_writer(&mut out, &reply)?;
        out.write_all(b"\n")?;
        out.flush()?;
    }
    Ok(())
}

/// Accepts connections forever.
pub fn run(listener: TcpListener, registry: Arc<Registry>) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let registry = Arc::clone(&registry);
        thread::spawn(move || {
            // a dropped connection only ends its own thread
            let _ = serve_connection(&registry, stream);
        });
    }
    Ok(())
}

/// Binds `addr` and serves in a background thread; returns the bound address.
pub fn spawn(addr: impl ToSocketAddrs) -> io::Result<(SocketAddr, Arc<Registry>)> {
    let listener = TcpListener::bind(addr)?;
    let local = listener.local_addr()?;
    let registry = Arc::new(Registry::new());
    let shared = Arc::clone(&registry);
    thread::spawn(move || run(listener, shared));
    Ok((local, registry))
}
