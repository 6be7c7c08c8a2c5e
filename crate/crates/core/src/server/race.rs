use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::config::{ConfigError, Mode, RaceConfig};
use super::net::{Endpoints, Inbound};
use super::results::{DriverResult, EndReason, RaceResult};
use super::session::{ActionSource, DriverSession, SessionStanding, MAX_SEND_FAILURES};
use crate::physics::{
    apply_removal_rules, lap_time_limit, resolve_contacts, CarParams, CarState, Dynamics,
    ParamsError, Standing, TIC,
};
use crate::protocol::{parse_action, parse_init, ActionFrame, Control, ProtocolError};
use crate::sensors::SensorConfig;
use crate::track::{TrackError, TrackModel};
use crate::world::World;

/// Wall-clock length of a tic in realtime mode.
pub const TIC_WALL: Duration = Duration::from_millis(20);
/// Grid spacing between consecutive cars, meters.
pub const GRID_SPACING: f64 = 10.0;
const IDLE_POLL: Duration = Duration::from_millis(100);

#[derive(Debug, Error)]
pub enum ServerError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("cannot open UDP sockets: {0}")]
    Bind(std::io::Error),
    #[error("no identification on ports {0:?} before the timeout")]
    IdentifyTimeout(Vec<u16>),
    #[error("cannot write results: {0}")]
    Results(std::io::Error),
}

/// What happened at one tic, per session (`None` for cars not racing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TicReport {
    pub episode: u64,
    pub tic: u64,
    pub sources: Vec<Option<ActionSource>>,
    /// Time from sending the frame to receiving a timely reply.
    pub reply_latency: Vec<Option<Duration>>,
    /// A restart was requested; no physics step was taken.
    pub restart: bool,
}

#[derive(Debug, Clone)]
pub struct RaceOutcome {
    pub result: RaceResult,
    pub tics: Vec<TicReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Identification,
    Racing,
}

/// The race engine. Owns the world; every mutation happens on the thread
/// that calls [`Server::run`].
pub struct Server {
    config: RaceConfig,
    net: Endpoints,
    ports: Vec<u16>,
    sessions: Vec<DriverSession>,
    world: World,
    grid: Vec<CarState>,
    dynamics: Dynamics,
    episode: u64,
    best_lap: Option<f64>,
    abort: Arc<AtomicBool>,
}

impl Server {
    /// Loads the track and car, then binds one socket per participant.
    pub fn bind(config: RaceConfig) -> Result<Self, ServerError> {
        config.validate()?;
        let track = TrackModel::load(&config.track_file)?;
        let params = match &config.car_file {
            Some(path) => CarParams::load(path)?,
            None => CarParams::default(),
        };
        let grid: Vec<CarState> = (0..config.participants.len())
            .map(|i| CarState::on_grid(&track, &params, GRID_SPACING * i as f64))
            .collect();
        let ports: Vec<u16> = config.participants.iter().map(|p| p.port).collect();
        let net = Endpoints::bind(config.bind, &ports).map_err(ServerError::Bind)?;
        let ports = net.ports();
        let sessions = config
            .participants
            .iter()
            .zip(&ports)
            .enumerate()
            .map(|(i, (p, &port))| {
                let sensors = SensorConfig {
                    noisy: config.flags.noisy,
                    noise_seed: config.seed,
                    noise_model: config.noise_model,
                    ..SensorConfig::default()
                };
                DriverSession::new(i, port, p.expected_id.clone(), sensors)
            })
            .collect();
        let dynamics = Dynamics::new(params.clone(), config.flags);
        Ok(Self {
            world: World::new(track, params, grid.clone()),
            config,
            net,
            ports,
            sessions,
            grid,
            dynamics,
            episode: 0,
            best_lap: None,
            abort: Arc::new(AtomicBool::new(false)),
        })
    }

    /// Bound ports, in participant order.
    pub fn ports(&self) -> &[u16] {
        &self.ports
    }

    /// Setting the flag ends the race at the next tic with a shutdown broadcast.
    pub fn abort_handle(&self) -> Arc<AtomicBool> {
        Arc::clone(&self.abort)
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn sessions(&self) -> &[DriverSession] {
        &self.sessions
    }

    fn track_name(&self) -> String {
        self.config
            .track_name
            .clone()
            .unwrap_or_else(|| self.world.track.name().to_string())
    }

    /// Identification, the tic loop, then shutdown and results.
    pub fn run(&mut self) -> Result<RaceOutcome, ServerError> {
        let mut tics = Vec::new();
        let end = if self.identify_all()? {
            self.race_loop(&mut tics)
        } else {
            EndReason::Aborted
        };
        let result = self.finish(end)?;
        Ok(RaceOutcome { result, tics })
    }

    /// Blocks until every session is identified. `false` if aborted first.
    fn identify_all(&mut self) -> Result<bool, ServerError> {
        for port in &self.ports {
            log::info!("Waiting for request on port {port}");
        }
        let started = Instant::now();
        while !self.sessions.iter().all(DriverSession::identified) {
            if self.abort.load(Ordering::Relaxed) {
                return Ok(false);
            }
            if let Some(limit) = self.config.identify_timeout {
                if started.elapsed() >= limit {
                    let waiting = self
                        .sessions
                        .iter()
                        .filter(|s| !s.identified())
                        .map(|s| s.port)
                        .collect();
                    return Err(ServerError::IdentifyTimeout(waiting));
                }
            }
            if let Ok(msg) = self.net.inbox().recv_timeout(IDLE_POLL) {
                self.handle(msg, Phase::Identification);
            }
        }
        log::info!(
            "{} bot(s) identified, {} on {} starting",
            self.sessions.len(),
            self.config.mode,
            self.track_name()
        );
        Ok(true)
    }

    fn race_loop(&mut self, log: &mut Vec<TicReport>) -> EndReason {
        loop {
            if self.abort.load(Ordering::Relaxed) {
                return EndReason::Aborted;
            }
            let started = Instant::now();
            log.push(self.run_tic());
            if let Some(end) = self.end_reason() {
                return end;
            }
            if self.config.realtime {
                if let Some(rest) = TIC_WALL.checked_sub(started.elapsed()) {
                    std::thread::sleep(rest);
                }
            }
        }
    }

    /// Handles one datagram. Returns the action it carried, if any, from the
    /// session's identified peer.
    fn handle(&mut self, msg: Inbound, phase: Phase) -> Option<ActionFrame> {
        let session = &mut self.sessions[msg.session];
        let payload = msg.payload.trim_matches(|c: char| c.is_whitespace() || c == '\0');
        if payload.contains("(init") {
            match parse_init(payload) {
                Ok(req) => {
                    if session.peer.is_some_and(|p| p != msg.peer) {
                        log::warn!(
                            "port {}: init from {} ignored, session belongs to {}",
                            session.port,
                            msg.peer,
                            session.peer.expect("checked")
                        );
                        return None;
                    }
                    if session.expected_id.as_ref().is_some_and(|id| *id != req.client_id) {
                        log::warn!(
                            "port {}: unexpected client id {}",
                            session.port,
                            req.client_id
                        );
                        return None;
                    }
                    session.sensors.config.track_angles = req.angles;
                    if session.peer.is_none() {
                        log::info!(
                            "Client {} identified on port {} from {}",
                            req.client_id,
                            session.port,
                            msg.peer
                        );
                    }
                    session.peer = Some(msg.peer);
                    session.client_id = Some(req.client_id);
                    let _ = self
                        .net
                        .send(msg.session, msg.peer, Control::Identified.literal());
                }
                Err(e @ ProtocolError::AngleOutOfRange(_)) => {
                    log::warn!("port {}: init rejected: {e}", session.port)
                }
                Err(e) => log::debug!("port {}: ignoring datagram: {e}", session.port),
            }
            return None;
        }
        if phase == Phase::Identification || session.peer != Some(msg.peer) {
            log::debug!("port {}: ignoring datagram from {}", session.port, msg.peer);
            return None;
        }
        match parse_action(payload) {
            Ok(action) => Some(action),
            Err(e) => {
                log::debug!("port {}: malformed action: {e}", session.port);
                None
            }
        }
    }

    /// One tic: sense, wait for actions, step.
    pub fn run_tic(&mut self) -> TicReport {
        let n = self.sessions.len();

        // Anything already queued arrived after the previous deadline.
        while let Ok(msg) = self.net.inbox().try_recv() {
            let i = msg.session;
            if let Some(action) = self.handle(msg, Phase::Racing) {
                self.sessions[i].late_action = Some(action);
            }
        }

        let mut awaiting = vec![false; n];
        for (i, waiting) in awaiting.iter_mut().enumerate() {
            let s = &mut self.sessions[i];
            let Some(peer) = s.peer.filter(|_| s.racing()) else {
                continue;
            };
            let frame = s.sensors.frame(&self.world, s.last_action.focus);
            match self.net.send(i, peer, &frame.encode()) {
                Ok(()) => {
                    s.send_failures = 0;
                    *waiting = true;
                }
                Err(e) => {
                    s.send_failures += 1;
                    log::warn!("port {}: send failed: {e}", s.port);
                    if s.send_failures >= MAX_SEND_FAILURES {
                        log::warn!("port {}: disconnected", s.port);
                        s.standing = SessionStanding::Disconnected;
                        self.world.active[i] = false;
                    }
                }
            }
        }

        let sent = Instant::now();
        let deadline = sent + self.config.action_timeout;
        let mut fresh: Vec<Option<ActionFrame>> = vec![None; n];
        let mut reply_latency = vec![None; n];
        while awaiting.iter().any(|w| *w) {
            let Some(left) = deadline.checked_duration_since(Instant::now()) else {
                break;
            };
            let Ok(msg) = self.net.inbox().recv_timeout(left) else {
                break;
            };
            let i = msg.session;
            let at = msg.at;
            if let Some(action) = self.handle(msg, Phase::Racing) {
                reply_latency[i] = Some(at.saturating_duration_since(sent));
                fresh[i] = Some(action);
                awaiting[i] = false;
            }
        }

        let mut sources = vec![None; n];
        let mut restart = false;
        for (i, s) in self.sessions.iter_mut().enumerate() {
            let late = s.late_action.take();
            if !s.racing() || s.peer.is_none() {
                continue;
            }
            let (action, source) = match (fresh[i], late) {
                (Some(a), _) => (a, ActionSource::Fresh),
                (None, Some(a)) => (a, ActionSource::Late),
                (None, None) => (s.last_action, ActionSource::Reused),
            };
            sources[i] = Some(source);
            restart |= action.meta;
            s.last_action = action;
        }

        let report = TicReport {
            episode: self.episode,
            tic: self.world.tic,
            sources,
            reply_latency,
            restart,
        };
        if restart {
            self.restart();
        } else {
            self.step();
        }
        report
    }

    fn step(&mut self) {
        let laps_before: Vec<u32> = self.world.cars.iter().map(|c| c.lap_count).collect();
        for (i, s) in self.sessions.iter().enumerate() {
            if s.racing() {
                self.world.cars[i] = self
                    .dynamics
                    .step(&self.world.cars[i], &s.last_action, &self.world.track);
            }
        }
        let before: Vec<_> = self.world.cars.iter().map(|c| c.position()).collect();
        if resolve_contacts(&mut self.world.cars, &self.world.active, &self.world.params) > 0 {
            for (car, old) in self.world.cars.iter_mut().zip(before) {
                if car.position() != old {
                    car.relocate_after_push(&self.world.track);
                }
            }
        }
        self.world.tic += 1;

        for (i, s) in self.sessions.iter_mut().enumerate() {
            if !s.racing() {
                continue;
            }
            s.total_time += TIC;
            let car = &self.world.cars[i];
            if car.lap_count > laps_before[i] {
                let t = car.last_lap_time;
                self.best_lap = Some(self.best_lap.map_or(t, |b| b.min(t)));
                if self.config.mode == Mode::Practice {
                    log::info!("Lap {}: {:.3}", car.lap_count, t);
                } else {
                    log::debug!("port {}: lap {} in {:.3}", s.port, car.lap_count, t);
                }
            }
        }
        let limit = lap_time_limit(self.best_lap);
        for (i, s) in self.sessions.iter_mut().enumerate() {
            if !s.racing() {
                continue;
            }
            let standing =
                apply_removal_rules(&self.world.cars[i], &self.world.params, self.config.flags, limit);
            if let Standing::Retired(reason) = standing {
                log::info!("port {}: retired ({reason:?})", s.port);
                s.standing = SessionStanding::Retired(reason);
                self.world.active[i] = false;
            }
        }
        self.world.update_positions();
    }

    /// Puts every car back on the grid and tells every client.
    fn restart(&mut self) {
        for (i, s) in self.sessions.iter().enumerate() {
            if let Some(peer) = s.peer {
                let _ = self.net.send(i, peer, Control::Restart.literal());
            }
        }
        self.episode += 1;
        self.best_lap = None;
        self.world.cars = self.grid.clone();
        self.world.tic = 0;
        for (i, s) in self.sessions.iter_mut().enumerate() {
            s.reset(self.episode);
            self.world.active[i] = s.standing != SessionStanding::Disconnected;
        }
        self.world.update_positions();
        log::info!("race restarted (episode {})", self.episode);
    }

    fn end_reason(&self) -> Option<EndReason> {
        let cars = &self.world.cars;
        if self.config.laps > 0 && cars.iter().any(|c| c.lap_count >= self.config.laps) {
            return Some(EndReason::Completed);
        }
        if self.config.distance_km > 0.0
            && cars.iter().any(|c| c.dist_raced >= self.config.distance_m())
        {
            return Some(EndReason::Completed);
        }
        if !self.sessions.iter().any(DriverSession::racing) {
            return Some(EndReason::NoCarsLeft);
        }
        if self.config.max_tics.is_some_and(|max| self.world.tic >= max) {
            return Some(EndReason::TicLimit);
        }
        None
    }

    fn finish(&mut self, end: EndReason) -> Result<RaceResult, ServerError> {
        for (i, s) in self.sessions.iter_mut().enumerate() {
            if let Some(peer) = s.peer {
                let _ = self.net.send(i, peer, Control::Shutdown.literal());
            }
            if end == EndReason::Completed && s.racing() {
                s.standing = SessionStanding::Finished;
            }
        }
        let mut drivers: Vec<DriverResult> = self
            .sessions
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let car = &self.world.cars[i];
                DriverResult {
                    client_id: s.client_id.clone().unwrap_or_else(|| "-".into()),
                    port: s.port,
                    laps: car.lap_count,
                    best_lap: car.best_lap_time,
                    total_time: s.total_time,
                    damage: car.damage,
                    dist_raced: car.dist_raced,
                    race_pos: self.world.race_pos[i],
                    standing: s.standing,
                }
            })
            .collect();
        drivers.sort_by_key(|d| d.race_pos);
        let result = RaceResult {
            track: self.track_name(),
            mode: self.config.mode,
            stage: self.config.stage,
            episode: self.episode,
            tics: self.world.tic,
            end,
            drivers,
        };
        log::info!("race over: {} after {} tics", end.label(), result.tics);
        if let Some(path) = &self.config.results {
            result.write(path).map_err(ServerError::Results)?;
        }
        Ok(result)
    }
}
