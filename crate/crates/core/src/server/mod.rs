//! The race server: one UDP server-bot per participant, a fixed 20 ms tic,
//! a per-tic action deadline with last-action reuse, restarts, lap timing
//! and results.
//!
//! Each tic the server sends every racing client its sensor frame, then
//! waits until every one of them has answered or the action timeout has
//! passed. A client that stays silent drives with its previous action. A
//! reply that misses its deadline is applied at the next tic unless a timely
//! reply to that tic arrives too.

mod args;
mod config;
mod net;
mod race;
mod results;
mod session;

pub use args::{ArgsError, ServerArgs, USAGE};
pub use config::{
    ConfigError, Mode, Participant, RaceConfig, BASE_PORT, DEFAULT_ACTION_TIMEOUT,
    MAX_PARTICIPANTS,
};
pub use race::{RaceOutcome, Server, ServerError, TicReport, GRID_SPACING, TIC_WALL};
pub use results::{json_path, DriverResult, EndReason, RaceResult};
pub use session::{ActionSource, DriverSession, SessionStanding, MAX_SEND_FAILURES};
