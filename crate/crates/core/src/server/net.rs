//! One UDP socket per server-bot, each drained by its own receiver thread
//! into a single queue owned by the tic loop.

use std::io::ErrorKind;
use std::net::{IpAddr, SocketAddr, UdpSocket};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{self, Receiver, Sender};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use crate::protocol::MAX_DATAGRAM;

/// How often an idle receiver checks whether it should stop.
const POLL: Duration = Duration::from_millis(50);

#[derive(Debug, Clone)]
pub struct Inbound {
    pub session: usize,
    pub peer: SocketAddr,
    pub payload: String,
    /// When the receiver thread picked the datagram up.
    pub at: Instant,
}

pub struct Endpoints {
    sockets: Vec<UdpSocket>,
    inbox: Receiver<Inbound>,
    stop: Arc<AtomicBool>,
    threads: Vec<JoinHandle<()>>,
}

impl Endpoints {
    pub fn bind(addr: IpAddr, ports: &[u16]) -> std::io::Result<Self> {
        let (tx, inbox) = mpsc::channel();
        let stop = Arc::new(AtomicBool::new(false));
        let mut sockets = Vec::with_capacity(ports.len());
        let mut threads = Vec::with_capacity(ports.len());
        for (session, &port) in ports.iter().enumerate() {
            let socket = UdpSocket::bind((addr, port))?;
            let reader = socket.try_clone()?;
            reader.set_read_timeout(Some(POLL))?;
            let tx = tx.clone();
            let stop = Arc::clone(&stop);
            threads.push(
                std::thread::Builder::new()
                    .name(format!("udp-{}", socket.local_addr()?.port()))
                    .spawn(move || receive_loop(session, reader, tx, stop))?,
            );
            sockets.push(socket);
        }
        Ok(Self {
            sockets,
            inbox,
            stop,
            threads,
        })
    }

    pub fn ports(&self) -> Vec<u16> {
        self.sockets
            .iter()
            .map(|s| s.local_addr().map(|a| a.port()).unwrap_or(0))
            .collect()
    }

    pub fn send(&self, session: usize, peer: SocketAddr, payload: &str) -> std::io::Result<()> {
        self.sockets[session].send_to(payload.as_bytes(), peer).map(|_| ())
    }

    pub fn inbox(&self) -> &Receiver<Inbound> {
        &self.inbox
    }
}

impl Drop for Endpoints {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::Relaxed);
        for t in self.threads.drain(..) {
            let _ = t.join();
        }
    }
}

fn receive_loop(session: usize, socket: UdpSocket, tx: Sender<Inbound>, stop: Arc<AtomicBool>) {
    let mut buf = [0u8; MAX_DATAGRAM];
    while !stop.load(Ordering::Relaxed) {
        match socket.recv_from(&mut buf) {
            Ok((n, peer)) => {
                let inbound = Inbound {
                    session,
                    peer,
                    payload: String::from_utf8_lossy(&buf[..n]).into_owned(),
                    at: Instant::now(),
                };
                if tx.send(inbound).is_err() {
                    break;
                }
            }
            Err(e) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => {}
            // ICMP port-unreachable from an earlier send surfaces here on
            // some platforms; it says nothing about this socket.
            Err(e) if e.kind() == ErrorKind::ConnectionRefused => {}
            Err(e) => {
                log::warn!("receive on session {session} failed: {e}");
                std::thread::sleep(POLL);
            }
        }
    }
}
