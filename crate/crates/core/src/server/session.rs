use std::net::SocketAddr;

use serde::{Deserialize, Serialize};

use crate::physics::RetireReason;
use crate::protocol::ActionFrame;
use crate::sensors::{SensorConfig, SensorSuite};

/// Consecutive send failures after which a session is dropped.
pub const MAX_SEND_FAILURES: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SessionStanding {
    Racing,
    Retired(RetireReason),
    Finished,
    Disconnected,
}

impl SessionStanding {
    pub fn label(self) -> &'static str {
        match self {
            SessionStanding::Racing => "racing",
            SessionStanding::Retired(RetireReason::Fuel) => "retired:fuel",
            SessionStanding::Retired(RetireReason::Damage) => "retired:damage",
            SessionStanding::Retired(RetireReason::LapTime) => "retired:laptime",
            SessionStanding::Finished => "finished",
            SessionStanding::Disconnected => "disconnected",
        }
    }
}

/// Where the action applied at a tic came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionSource {
    /// Answered within this tic's deadline.
    Fresh,
    /// Answered after the previous tic's deadline.
    Late,
    /// Nothing arrived; the last action was applied again.
    Reused,
}

/// One server-bot: a port, the client identified on it and its race state.
#[derive(Debug, Clone)]
pub struct DriverSession {
    pub port: u16,
    pub expected_id: Option<String>,
    pub peer: Option<SocketAddr>,
    pub client_id: Option<String>,
    pub sensors: SensorSuite,
    pub last_action: ActionFrame,
    /// A reply that missed its deadline, waiting to stand in for the next one.
    pub late_action: Option<ActionFrame>,
    pub standing: SessionStanding,
    pub send_failures: u32,
    /// Simulated seconds spent racing in this episode.
    pub total_time: f64,
}

impl DriverSession {
    pub fn new(index: usize, port: u16, expected_id: Option<String>, sensors: SensorConfig) -> Self {
        Self {
            port,
            expected_id,
            peer: None,
            client_id: None,
            sensors: SensorSuite::new(sensors, index),
            last_action: ActionFrame::default(),
            late_action: None,
            standing: SessionStanding::Racing,
            send_failures: 0,
            total_time: 0.0,
        }
    }

    pub fn identified(&self) -> bool {
        self.peer.is_some()
    }

    pub fn racing(&self) -> bool {
        self.standing == SessionStanding::Racing
    }

    /// Back to the grid for a new episode; identification and angles survive.
    pub fn reset(&mut self, episode: u64) {
        self.sensors.reset(episode);
        self.last_action = ActionFrame::default();
        self.late_action = None;
        if self.standing != SessionStanding::Disconnected {
            self.standing = SessionStanding::Racing;
        }
        self.total_time = 0.0;
    }
}
