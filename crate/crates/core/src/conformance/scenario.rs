use std::net::{IpAddr, Ipv4Addr};
use std::path::PathBuf;
use std::time::Duration;

use crate::client::{ClientError, Driver, EpisodeRunner, Recorder, RunReport};
use crate::protocol::{ActionFrame, SensorFrame};
use crate::server::{ActionSource, RaceConfig, RaceOutcome, Server, ServerError};

/// How long loopback helpers wait for identification or a silent peer.
pub const LOOPBACK_PATIENCE: Duration = Duration::from_secs(10);

/// Absolute path of a bundled fixture, e.g. `tracks/oval.trk`.
pub fn fixture_path(relative: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(relative)
}

/// One client's side of a loopback race.
#[derive(Debug)]
pub struct ClientRun<D> {
    pub driver: D,
    pub report: Result<RunReport, ClientError>,
    pub recorder: Recorder,
}

/// Runs a race over loopback: the server on the calling thread, one client
/// thread per driver. Ports are ephemeral and bound to 127.0.0.1, so
/// concurrent races do not collide.
pub fn run_loopback<D>(
    config: RaceConfig,
    drivers: Vec<D>,
) -> Result<(RaceOutcome, Vec<ClientRun<D>>), ServerError>
where
    D: Driver + Send + 'static,
{
    run_loopback_with(config, drivers, |_, _| {})
}

/// [`run_loopback`] with a hook to adjust each client's runner, e.g. its
/// episode limits.
pub fn run_loopback_with<D>(
    mut config: RaceConfig,
    drivers: Vec<D>,
    customize: impl Fn(usize, &mut EpisodeRunner),
) -> Result<(RaceOutcome, Vec<ClientRun<D>>), ServerError>
where
    D: Driver + Send + 'static,
{
    config.bind = IpAddr::V4(Ipv4Addr::LOCALHOST);
    config.identify_timeout.get_or_insert(LOOPBACK_PATIENCE);
    for p in &mut config.participants {
        p.port = 0;
    }
    let stage = config.stage;
    let track_name = config.track_name.clone().unwrap_or_else(|| "unknown".into());
    let mut server = Server::bind(config)?;
    let handles: Vec<_> = drivers
        .into_iter()
        .zip(server.ports().to_vec())
        .enumerate()
        .map(|(i, (mut driver, port))| {
            let mut runner = EpisodeRunner {
                host: "127.0.0.1".into(),
                port,
                client_id: format!("bot{i}"),
                stage,
                track_name: track_name.clone(),
                identify_attempts: Some(LOOPBACK_PATIENCE.as_secs() as u32),
                idle_timeout: Some(LOOPBACK_PATIENCE),
                ..EpisodeRunner::default()
            };
            customize(i, &mut runner);
            std::thread::spawn(move || {
                let mut recorder = Recorder::default();
                let report = runner.run_observed(&mut driver, &mut recorder);
                ClientRun {
                    driver,
                    report,
                    recorder,
                }
            })
        })
        .collect();
    let outcome = server.run();
    drop(server);
    let clients = handles
        .into_iter()
        .map(|h| h.join().expect("client thread panicked"))
        .collect();
    Ok((outcome?, clients))
}

/// Replies to the k-th frame after `delays[k]` (zero beyond the list).
#[derive(Debug, Clone)]
pub struct DelayedDriver {
    delays: Vec<Duration>,
    step: usize,
}

impl DelayedDriver {
    pub fn new(delays: Vec<Duration>) -> Self {
        Self { delays, step: 0 }
    }
}

impl Driver for DelayedDriver {
    fn drive(&mut self, _frame: &SensorFrame) -> ActionFrame {
        if let Some(delay) = self.delays.get(self.step) {
            std::thread::sleep(*delay);
        }
        self.step += 1;
        ActionFrame {
            gear: 1,
            ..ActionFrame::default()
        }
    }
}

/// Per tic: the scripted delay and what the server did with the reply.
#[derive(Debug, Clone, PartialEq)]
pub struct SlowClientReport {
    pub delays: Vec<Duration>,
    pub sources: Vec<ActionSource>,
    pub latencies: Vec<Option<Duration>>,
}

impl SlowClientReport {
    pub fn reused_tics(&self) -> Vec<usize> {
        (0..self.sources.len())
            .filter(|&t| self.sources[t] == ActionSource::Reused)
            .collect()
    }

    /// Tics whose delay exceeded `timeout`: where reuse is expected.
    pub fn late_tics(&self, timeout: Duration) -> Vec<usize> {
        (0..self.delays.len())
            .filter(|&t| self.delays[t] > timeout)
            .collect()
    }
}

/// A realtime practice on the oval with one scripted client that answers
/// tic `k` after `delays_ms[k]` milliseconds. Wall-clock sensitive.
pub fn run_slow_client_scenario(
    delays_ms: &[u64],
    action_timeout: Duration,
) -> Result<SlowClientReport, ServerError> {
    let delays: Vec<Duration> = delays_ms.iter().map(|ms| Duration::from_millis(*ms)).collect();
    let mut config = RaceConfig::practice(fixture_path("tracks/oval.trk"), 1);
    config.realtime = true;
    config.action_timeout = action_timeout;
    config.max_tics = Some(delays.len() as u64);
    let (outcome, _) = run_loopback(config, vec![DelayedDriver::new(delays.clone())])?;
    let sources = outcome
        .tics
        .iter()
        .map(|t| t.sources[0].unwrap_or(ActionSource::Reused))
        .collect();
    let latencies = outcome.tics.iter().map(|t| t.reply_latency[0]).collect();
    Ok(SlowClientReport {
        delays,
        sources,
        latencies,
    })
}
