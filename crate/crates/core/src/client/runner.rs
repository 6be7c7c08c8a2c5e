use std::io::ErrorKind;
use std::net::{SocketAddr, ToSocketAddrs, UdpSocket};
use std::time::{Duration, Instant};

use thiserror::Error;

use super::driver::{Driver, NoObserver, Observer};
use crate::protocol::{
    classify, parse_sensors, ActionFrame, InitRequest, MessageKind, Stage, MAX_DATAGRAM,
};

/// Interval between identification attempts.
pub const IDENTIFY_RETRY: Duration = Duration::from_secs(1);
/// Consecutive socket errors tolerated before giving up.
pub const MAX_SOCKET_ERRORS: u32 = 5;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("cannot resolve {0}")]
    Resolve(String),
    #[error("sensor angle {0} outside [-90, 90]")]
    BadAngle(f64),
    #[error("socket error: {0}")]
    Io(#[from] std::io::Error),
    #[error("no `***identified***` after {0} attempts")]
    NotIdentified(u32),
    #[error("server silent for {0:?}")]
    Idle(Duration),
}

/// Connection and episode settings of a client.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRunner {
    pub host: String,
    pub port: u16,
    pub client_id: String,
    /// At least 1.
    pub max_episodes: u32,
    /// Sensor frames per episode handed to the driver; `0` is unlimited.
    pub max_steps: u64,
    pub track_name: String,
    pub stage: Stage,
    pub verbose: bool,
    /// Identification attempts before giving up; `None` retries forever.
    pub identify_attempts: Option<u32>,
    /// Give up when the server stays silent this long; `None` waits forever.
    pub idle_timeout: Option<Duration>,
}

impl Default for EpisodeRunner {
    fn default() -> Self {
        Self {
            host: "localhost".into(),
            port: 3001,
            client_id: "SCR".into(),
            max_episodes: 1,
            max_steps: 0,
            track_name: "unknown".into(),
            stage: Stage::Unknown,
            verbose: false,
            identify_attempts: None,
            idle_timeout: None,
        }
    }
}

/// How a run went.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    /// Episodes started (identified).
    pub episodes: u32,
    /// Sensor frames received per episode.
    pub steps: Vec<u64>,
    /// The run ended on `***shutdown***`.
    pub shutdown: bool,
    pub restarts_requested: u32,
    pub malformed: u64,
}

impl EpisodeRunner {
    pub fn run(&self, driver: &mut dyn Driver) -> Result<RunReport, ClientError> {
        self.run_observed(driver, &mut NoObserver)
    }

    /// Runs up to `max_episodes` episodes. `on_shutdown` is called exactly
    /// once, when the run ends for any reason other than a socket error.
    pub fn run_observed(
        &self,
        driver: &mut dyn Driver,
        observer: &mut dyn Observer,
    ) -> Result<RunReport, ClientError> {
        let server = self.resolve()?;
        let socket = UdpSocket::bind(if server.is_ipv4() { "0.0.0.0:0" } else { "[::]:0" })?;
        driver.set_race_info(self.stage, &self.track_name);
        let angles = driver.init_angles();
        if let Some(bad) = angles.iter().find(|a| !(-90.0..=90.0).contains(*a)) {
            return Err(ClientError::BadAngle(*bad));
        }
        let init = InitRequest::new(&self.client_id, angles).encode();

        let mut report = RunReport::default();
        let mut buf = [0u8; MAX_DATAGRAM];
        'episodes: while report.episodes < self.max_episodes {
            self.identify(&socket, server, &init, &mut buf)?;
            report.episodes += 1;
            report.steps.push(0);
            let mut steps = 0u64;
            let mut errors = 0;
            socket.set_read_timeout(self.idle_timeout)?;
            loop {
                let n = match socket.recv_from(&mut buf) {
                    Ok((n, from)) if from == server => n,
                    Ok(_) => continue,
                    Err(e) if is_timeout(&e) => {
                        return Err(ClientError::Idle(self.idle_timeout.unwrap_or_default()))
                    }
                    Err(e) => {
                        errors += 1;
                        if errors >= MAX_SOCKET_ERRORS {
                            return Err(e.into());
                        }
                        continue;
                    }
                };
                errors = 0;
                let message = String::from_utf8_lossy(&buf[..n]);
                match classify(&message) {
                    MessageKind::Shutdown => {
                        log::info!("server shut the race down");
                        report.shutdown = true;
                        break 'episodes;
                    }
                    MessageKind::Restart => {
                        log::info!("race restarted");
                        driver.on_restart();
                        continue 'episodes;
                    }
                    MessageKind::Identified => {}
                    MessageKind::Data => {
                        let frame = match parse_sensors(&message) {
                            Ok(frame) => frame,
                            Err(e) => {
                                log::warn!("skipping malformed sensor message: {e}");
                                report.malformed += 1;
                                continue;
                            }
                        };
                        observer.frame_received(&frame);
                        let action = if self.max_steps > 0 && steps >= self.max_steps {
                            report.restarts_requested += 1;
                            ActionFrame::restart()
                        } else {
                            let started = Instant::now();
                            let action = driver.drive(&frame);
                            if self.verbose {
                                log::info!("step {steps}: drive took {:?}", started.elapsed());
                            }
                            action
                        };
                        steps += 1;
                        *report.steps.last_mut().expect("episode started") = steps;
                        self.send(&socket, server, &action.encode())?;
                        observer.action_sent(&action);
                    }
                }
            }
        }
        driver.on_shutdown();
        Ok(report)
    }

    fn resolve(&self) -> Result<SocketAddr, ClientError> {
        let target = format!("{}:{}", self.host, self.port);
        target
            .to_socket_addrs()
            .map_err(|_| ClientError::Resolve(target.clone()))?
            .find(SocketAddr::is_ipv4)
            .or_else(|| target.to_socket_addrs().ok()?.next())
            .ok_or(ClientError::Resolve(target))
    }

    fn send(&self, socket: &UdpSocket, server: SocketAddr, payload: &str) -> Result<(), ClientError> {
        let mut errors = 0;
        loop {
            match socket.send_to(payload.as_bytes(), server) {
                Ok(_) => return Ok(()),
                Err(e) => {
                    errors += 1;
                    if errors >= MAX_SOCKET_ERRORS {
                        return Err(e.into());
                    }
                }
            }
        }
    }

    /// Sends the init once per second until `***identified***` comes back.
    /// Sensor messages that arrive in the meantime are dropped.
    fn identify(
        &self,
        socket: &UdpSocket,
        server: SocketAddr,
        init: &str,
        buf: &mut [u8],
    ) -> Result<(), ClientError> {
        let mut attempts = 0;
        loop {
            if self.identify_attempts.is_some_and(|max| attempts >= max) {
                return Err(ClientError::NotIdentified(attempts));
            }
            attempts += 1;
            // A refused send means nobody listens yet; keep retrying.
            if let Err(e) = socket.send_to(init.as_bytes(), server) {
                log::debug!("init send failed: {e}");
            }
            let window = Instant::now() + IDENTIFY_RETRY;
            while let Some(left) = window.checked_duration_since(Instant::now()) {
                socket.set_read_timeout(Some(left.max(Duration::from_millis(1))))?;
                match socket.recv_from(buf) {
                    Ok((n, from)) if from == server => {
                        if classify(&String::from_utf8_lossy(&buf[..n])) == MessageKind::Identified {
                            log::info!("identified by {server} as {}", self.client_id);
                            return Ok(());
                        }
                    }
                    Ok(_) => {}
                    Err(e) if is_timeout(&e) => break,
                    Err(e) if e.kind() == ErrorKind::ConnectionRefused => {
                        std::thread::sleep(left.min(Duration::from_millis(50)));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
}

fn is_timeout(e: &std::io::Error) -> bool {
    matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut)
}
