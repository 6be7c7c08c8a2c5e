use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::Mode;
use super::session::SessionStanding;
use crate::protocol::Stage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndReason {
    /// The leader reached the lap or distance limit.
    Completed,
    /// Every car retired or disconnected.
    NoCarsLeft,
    TicLimit,
    Aborted,
}

impl EndReason {
    pub fn label(self) -> &'static str {
        match self {
            EndReason::Completed => "completed",
            EndReason::NoCarsLeft => "no_cars_left",
            EndReason::TicLimit => "tic_limit",
            EndReason::Aborted => "aborted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverResult {
    pub client_id: String,
    pub port: u16,
    pub laps: u32,
    pub best_lap: Option<f64>,
    pub total_time: f64,
    pub damage: f64,
    pub dist_raced: f64,
    pub race_pos: u32,
    pub standing: SessionStanding,
}

/// Final classification. Contains nothing that depends on wall-clock time,
/// so a replayed race writes identical files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaceResult {
    pub track: String,
    pub mode: Mode,
    pub stage: Stage,
    pub episode: u64,
    pub tics: u64,
    pub end: EndReason,
    /// Sorted by race position.
    pub drivers: Vec<DriverResult>,
}

impl RaceResult {
    pub fn aborted(&self) -> bool {
        self.end == EndReason::Aborted
    }

    /// One line per driver after a short header.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "track {} mode {} stage {} episode {} tics {} end {}",
            self.track,
            self.mode,
            self.stage.code(),
            self.episode,
            self.tics,
            self.end.label()
        );
        let _ = writeln!(out, "pos id port laps best total damage distRaced standing");
        for d in &self.drivers {
            let best = d
                .best_lap
                .map_or_else(|| "-".to_string(), |b| format!("{b:.3}"));
            let _ = writeln!(
                out,
                "{} {} {} {} {} {:.3} {:.1} {:.3} {}",
                d.race_pos,
                d.client_id,
                d.port,
                d.laps,
                best,
                d.total_time,
                d.damage,
                d.dist_raced,
                d.standing.label()
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize")
    }

    /// Writes `path` as text and `path` with a `.json` extension as JSON.
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_text())?;
        std::fs::write(json_path(path), self.to_json() + "\n")
    }
}

pub fn json_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}
