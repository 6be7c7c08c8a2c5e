//! Sensor and action frames and the UDP text protocol that carries them.
//!
//! Every message is a single ASCII datagram. Data messages are a sequence of
//! `(name value …)` groups; the server also sends three bare control
//! literals (`***identified***`, `***shutdown***`, `***restart***`). A client
//! introduces itself with `<id>(init a0 … a18)`.

mod frames;
mod init;
pub mod wire;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use frames::{ActionFrame, SensorFrame, ACTION_NAMES, NO_FOCUS, SENSOR_NAMES};
pub use init::{default_track_angles, InitRequest};

/// Number of range finders along the track edges.
pub const TRACK_SENSORS: usize = 19;
/// Number of 10-degree opponent sectors around the car.
pub const OPPONENT_SECTORS: usize = 36;
/// Number of 1-degree focus beams.
pub const FOCUS_SENSORS: usize = 5;
/// Number of wheels reported in `wheelSpinVel`.
pub const WHEELS: usize = 4;
/// Range of every range finder and opponent sensor, in meters.
pub const SENSOR_RANGE: f64 = 200.0;
/// Reading returned by a range finder when its value cannot be trusted.
pub const UNRELIABLE: f64 = -1.0;
/// Front wheel angle, in radians, produced by `steer = ±1`.
pub const STEER_LOCK: f64 = 0.366519;
/// Largest datagram either side will send or accept.
pub const MAX_DATAGRAM: usize = 4096;

/// Errors raised while decoding a message.
///
/// Everything except [`ProtocolError::BadAngleCount`] and
/// [`ProtocolError::AngleOutOfRange`] is a malformed message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("malformed message: {0}")]
    Malformed(String),
    #[error("malformed message: `{name}` has non-numeric value {value:?}")]
    BadNumber { name: String, value: String },
    #[error("malformed message: {name} arity: expected {expected} values, found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("malformed message: missing sensors {}", .0.join(", "))]
    MissingSensors(Vec<&'static str>),
    #[error("malformed message: invalid client id {0:?}")]
    BadClientId(String),
    #[error("init carries {0} angles, expected 19")]
    BadAngleCount(usize),
    #[error("init angle {0} outside [-90, 90] degrees")]
    AngleOutOfRange(f64),
}

impl ProtocolError {
    /// Stable snake_case name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            ProtocolError::Malformed(_) => "malformed",
            ProtocolError::BadNumber { .. } => "bad_number",
            ProtocolError::Arity { .. } => "arity",
            ProtocolError::MissingSensors(_) => "missing_sensors",
            ProtocolError::BadClientId(_) => "bad_client_id",
            ProtocolError::BadAngleCount(_) => "bad_angle_count",
            ProtocolError::AngleOutOfRange(_) => "angle_out_of_range",
        }
    }

    pub fn is_malformed(&self) -> bool {
        !matches!(
            self,
            ProtocolError::BadAngleCount(_) | ProtocolError::AngleOutOfRange(_)
        )
    }
}

/// Out-of-band literals the server sends to a client.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Control {
    Identified,
    Shutdown,
    Restart,
}

impl Control {
    pub const ALL: [Control; 3] = [Control::Identified, Control::Shutdown, Control::Restart];

    pub const fn literal(self) -> &'static str {
        match self {
            Control::Identified => "***identified***",
            Control::Shutdown => "***shutdown***",
            Control::Restart => "***restart***",
        }
    }
}

/// What a server-to-client datagram is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageKind {
    Identified,
    Shutdown,
    Restart,
    Data,
}

/// The three control literals, in `identified, shutdown, restart` order.
pub fn control_tokens() -> [&'static str; 3] {
    Control::ALL.map(Control::literal)
}

/// Classifies a received message. Trailing whitespace and NULs are ignored.
pub fn classify(message: &str) -> MessageKind {
    let trimmed = message.trim_matches(|c: char| c.is_ascii_whitespace() || c == '\0');
    match trimmed {
        "***identified***" => MessageKind::Identified,
        "***shutdown***" => MessageKind::Shutdown,
        "***restart***" => MessageKind::Restart,
        _ => MessageKind::Data,
    }
}

pub fn encode_sensors(frame: &SensorFrame) -> String {
    frame.encode()
}

pub fn parse_sensors(message: &str) -> Result<SensorFrame, ProtocolError> {
    SensorFrame::parse(message)
}

pub fn encode_action(action: &ActionFrame) -> String {
    action.encode()
}

pub fn parse_action(message: &str) -> Result<ActionFrame, ProtocolError> {
    ActionFrame::parse(message)
}

pub fn parse_init(message: &str) -> Result<InitRequest, ProtocolError> {
    InitRequest::parse(message)
}


/// Competition phase announced to the driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Warmup,
    Qualifying,
    Race,
    #[default]
    Unknown,
}

impl Stage {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Stage::Warmup),
            1 => Some(Stage::Qualifying),
            2 => Some(Stage::Race),
            3 => Some(Stage::Unknown),
            _ => None,
        }
    }
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::Warmup => "warmup",
            Stage::Qualifying => "qualifying",
            Stage::Race => "race",
            Stage::Unknown => "unknown",
        })
    }
}

#[cfg(test)]
mod stage_tests {
    use super::Stage;

    #[test]
    fn codes_round_trip() {
        for code in 0..4 {
            assert_eq!(Stage::from_code(code).unwrap().code(), code);
        }
        assert_eq!(Stage::from_code(4), None);
        assert_eq!(Stage::default(), Stage::Unknown);
        assert_eq!(Stage::from_code(1), Some(Stage::Qualifying));
    }
}
