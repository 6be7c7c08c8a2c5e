//! Race configuration: a plain `key = value` text file.
//!
//! ```text
//! # three laps alone on the oval
//! track = ../tracks/oval.trk
//! mode = practice
//! laps = 3
//! ports = 3001
//! ```
//!
//! Paths are resolved relative to the configuration file.

use std::fmt;
use std::net::{IpAddr, Ipv4Addr};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::physics::RaceFlags;
use crate::protocol::Stage;
use crate::sensors::NoiseModel;

/// First port handed out when the configuration does not list ports.
pub const BASE_PORT: u16 = 3001;
pub const MAX_PARTICIPANTS: usize = 10;
pub const DEFAULT_ACTION_TIMEOUT: Duration = Duration::from_millis(10);

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read race config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("race config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid race config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// One bot alone on track; lap times are printed as they happen.
    #[default]
    Practice,
    QuickRace,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Practice => "practice",
            Mode::QuickRace => "quickrace",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    /// `0` binds an ephemeral port.
    pub port: u16,
    /// When set, inits carrying any other id are ignored.
    pub expected_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaceConfig {
    pub track_file: PathBuf,
    /// Defaults to the name declared in the track file.
    pub track_name: Option<String>,
    /// Car parameter file; the bundled defaults when absent.
    pub car_file: Option<PathBuf>,
    pub participants: Vec<Participant>,
    pub laps: u32,
    pub distance_km: f64,
    pub mode: Mode,
    pub stage: Stage,
    pub flags: RaceFlags,
    pub action_timeout: Duration,
    /// Pace tics at 20 ms of wall time; otherwise run as fast as replies allow.
    pub realtime: bool,
    pub seed: u64,
    pub noise_model: NoiseModel,
    /// Text results path; the JSON variant goes next to it with a `.json` extension.
    pub results: Option<PathBuf>,
    pub max_tics: Option<u64>,
    pub identify_timeout: Option<Duration>,
    pub bind: IpAddr,
}

impl RaceConfig {
    /// A single-bot practice on `track_file` with every other setting at its default.
    pub fn practice(track_file: impl Into<PathBuf>, laps: u32) -> Self {
        Self {
            track_file: track_file.into(),
            track_name: None,
            car_file: None,
            participants: vec![Participant {
                port: BASE_PORT,
                expected_id: None,
            }],
            laps,
            distance_km: 0.0,
            mode: Mode::Practice,
            stage: Stage::Unknown,
            flags: RaceFlags::default(),
            action_timeout: DEFAULT_ACTION_TIMEOUT,
            realtime: true,
            seed: 0,
            noise_model: NoiseModel::default(),
            results: None,
            max_tics: None,
            identify_timeout: None,
            bind: IpAddr::V4(Ipv4Addr::UNSPECIFIED),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new("")))
    }

    /// Parses configuration text, resolving relative paths against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut config = Self::practice(PathBuf::new(), 0);
        let mut track = None;
        let mut ports: Option<Vec<u16>> = None;
        let mut count: Option<usize> = None;
        let mut ids: Option<Vec<Option<String>>> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| ConfigError::Parse {
                line,
                message: format!("{key}: {what} `{value}`"),
            };
            match key {
                "track" => track = Some(base.join(value)),
                "track_name" => config.track_name = Some(value.to_string()),
                "car" => config.car_file = Some(base.join(value)),
                "laps" => config.laps = value.parse().map_err(|_| bad("not a lap count"))?,
                "distance_km" => {
                    config.distance_km = value
                        .parse::<f64>()
                        .ok()
                        .filter(|d| d.is_finite() && *d >= 0.0)
                        .ok_or_else(|| bad("not a distance"))?
                }
                "mode" => {
                    config.mode = match value {
                        "practice" => Mode::Practice,
                        "quickrace" => Mode::QuickRace,
                        _ => return Err(bad("unknown mode")),
                    }
                }
                "stage" => {
                    config.stage = value
                        .parse()
                        .ok()
                        .and_then(Stage::from_code)
                        .ok_or_else(|| bad("stage must be 0..3, found"))?
                }
                "ports" => {
                    ports = Some(
                        value
                            .split(|c: char| c == ',' || c.is_whitespace())
                            .filter(|t| !t.is_empty())
                            .map(|t| t.parse().map_err(|_| bad("bad port in")))
                            .collect::<Result<_, _>>()?,
                    )
                }
                "participants" => {
                    count = Some(value.parse().map_err(|_| bad("not a count"))?)
                }
                "ids" => {
                    ids = Some(
                        value
                            .split_whitespace()
                            .map(|t| (t != "-").then(|| t.to_string()))
                            .collect(),
                    )
                }
                "timeout_ns" => {
                    config.action_timeout =
                        Duration::from_nanos(value.parse().map_err(|_| bad("not nanoseconds"))?)
                }
                "realtime" => config.realtime = parse_bool(value).ok_or_else(|| bad("not a boolean"))?,
                "seed" => config.seed = value.parse().map_err(|_| bad("not a seed"))?,
                "noise_model" => {
                    config.noise_model = match value {
                        "range" => NoiseModel::FractionOfRange,
                        "reading" => NoiseModel::FractionOfReading,
                        _ => return Err(bad("unknown noise model")),
                    }
                }
                "results" => config.results = Some(base.join(value)),
                "max_tics" => config.max_tics = Some(value.parse().map_err(|_| bad("not a tic count"))?),
                "identify_timeout_s" => {
                    config.identify_timeout = Some(Duration::from_secs_f64(
                        value
                            .parse::<f64>()
                            .ok()
                            .filter(|s| s.is_finite() && *s > 0.0)
                            .ok_or_else(|| bad("not a duration"))?,
                    ))
                }
                "bind" => config.bind = value.parse().map_err(|_| bad("not an address"))?,
                "noisy" | "nofuel" | "nodamage" | "nolaptime" => {
                    let on = parse_bool(value).ok_or_else(|| bad("not a boolean"))?;
                    let flag = match key {
                        "noisy" => &mut config.flags.noisy,
                        "nofuel" => &mut config.flags.nofuel,
                        "nodamage" => &mut config.flags.nodamage,
                        _ => &mut config.flags.nolaptime,
                    };
                    *flag = on;
                }
                _ => {
                    return Err(ConfigError::Parse {
                        line,
                        message: format!("unknown key `{key}`"),
                    })
                }
            }
        }

        config.track_file = track.ok_or_else(|| ConfigError::Invalid("missing `track`".into()))?;
        let ports = match (ports, count) {
            (Some(p), Some(n)) if p.len() != n => {
                return Err(ConfigError::Invalid(format!(
                    "{} ports listed for {n} participants",
                    p.len()
                )))
            }
            (Some(p), _) => p,
            (None, n) => {
                let n = n.unwrap_or(1);
                if n > MAX_PARTICIPANTS {
                    return Err(ConfigError::Invalid(format!(
                        "at most {MAX_PARTICIPANTS} participants, found {n}"
                    )));
                }
                (0..n as u16).map(|i| BASE_PORT + i).collect()
            }
        };
        let ids = ids.unwrap_or_default();
        if ids.len() > ports.len() {
            return Err(ConfigError::Invalid("more ids than participants".into()));
        }
        config.participants = ports
            .into_iter()
            .enumerate()
            .map(|(i, port)| Participant {
                port,
                expected_id: ids.get(i).cloned().flatten(),
            })
            .collect();
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self.participants.len();
        if n == 0 || n > MAX_PARTICIPANTS {
            return Err(ConfigError::Invalid(format!(
                "1..={MAX_PARTICIPANTS} participants required, found {n}"
            )));
        }
        if self.mode == Mode::Practice && n != 1 {
            return Err(ConfigError::Invalid(format!(
                "practice allows a single bot, found {n}"
            )));
        }
        for (i, a) in self.participants.iter().enumerate() {
            if a.port != 0 && self.participants[..i].iter().any(|b| b.port == a.port) {
                return Err(ConfigError::Invalid(format!("port {} listed twice", a.port)));
            }
        }
        if (self.laps > 0) == (self.distance_km > 0.0) {
            return Err(ConfigError::Invalid(
                "exactly one of `laps` and `distance_km` must be nonzero".into(),
            ));
        }
        if self.action_timeout.is_zero() {
            return Err(ConfigError::Invalid("action timeout must be positive".into()));
        }
        Ok(())
    }

    pub fn distance_m(&self) -> f64 {
        self.distance_km * 1000.0
    }
}

fn parse_bool(value: &str) -> Option<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RaceConfig, ConfigError> {
        RaceConfig::parse(text, Path::new("/races"))
    }

    #[test]
    fn minimal_practice() {
        let c = parse("track = ../tracks/oval.trk\nlaps = 3\n").unwrap();
        assert_eq!(c.track_file, Path::new("/races/../tracks/oval.trk"));
        assert_eq!(c.mode, Mode::Practice);
        assert_eq!(c.participants.len(), 1);
        assert_eq!(c.participants[0].port, 3001);
        assert_eq!(c.action_timeout, Duration::from_nanos(10_000_000));
        assert_eq!(c.stage, Stage::Unknown);
        assert!(c.realtime);
    }

    #[test]
    fn quick_race_default_ports() {
        let c = parse(
            "track = t.trk # the oval\nmode = quickrace\nparticipants = 3\ndistance_km = 5\nstage = 2\nids = a - c\n",
        )
        .unwrap();
        let ports: Vec<u16> = c.participants.iter().map(|p| p.port).collect();
        assert_eq!(ports, vec![3001, 3002, 3003]);
        assert_eq!(c.participants[0].expected_id.as_deref(), Some("a"));
        assert_eq!(c.participants[1].expected_id, None);
        assert_eq!(c.stage, Stage::Race);
        assert_eq!(c.distance_m(), 5000.0);
    }

    #[test]
    fn flags_and_timing() {
        let c = parse(
            "track = t.trk\nlaps = 1\nnofuel = yes\nnoisy = on\ntimeout_ns = 20000000\nrealtime = false\nseed = 9\nmax_tics = 50\n",
        )
        .unwrap();
        assert!(c.flags.nofuel && c.flags.noisy && !c.flags.nodamage);
        assert_eq!(c.action_timeout, Duration::from_millis(20));
        assert!(!c.realtime);
        assert_eq!(c.seed, 9);
        assert_eq!(c.max_tics, Some(50));
    }

    #[test]
    fn practice_needs_one_bot() {
        let err = parse("track = t.trk\nlaps = 1\nports = 3001 3002\n").unwrap_err();
        assert!(err.to_string().contains("single bot"), "{err}");
    }

    #[test]
    fn exactly_one_length() {
        assert!(parse("track = t.trk\n").is_err());
        assert!(parse("track = t.trk\nlaps = 2\ndistance_km = 1\n").is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            parse("track = t.trk\nlaps = 1\nspeed = 11\n"),
            Err(ConfigError::Parse { line: 3, .. })
        ));
        assert!(matches!(parse("track t.trk\n"), Err(ConfigError::Parse { line: 1, .. })));
        assert!(parse("track = t.trk\nlaps = 1\nstage = 4\n").is_err());
        assert!(parse("track = t.trk\nlaps = 1\nmode = quickrace\nports = 3001 3001\n").is_err());
        assert!(parse("laps = 1\n").is_err());
    }
}
