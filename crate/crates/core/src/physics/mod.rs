//! Simplified car dynamics stepped at a fixed 20 ms tic.
//!
//! The model is a kinematic bicycle with a friction cap on traction, braking
//! and cornering, a piecewise-linear engine torque curve driven through a
//! seven-ratio gearbox, and a spring-damper suspension proxy that gives the
//! `z` sensor something to report. It is deterministic: the same state,
//! action and parameters always produce a bit-identical successor.

mod dynamics;
mod params;
mod rules;
mod state;

pub use dynamics::{resolve_contacts, Dynamics};
pub use params::{CarParams, ParamsError, TorquePoint, DEFAULT_PARAMS};
pub use rules::{
    apply_removal_rules, lap_time_limit, RaceFlags, RetireReason, Standing, FIRST_LAP_TIME_LIMIT,
    LAP_TIME_LIMIT_FACTOR,
};
pub use state::{speed_triplet, CarState, MS_TO_KMH};

/// Simulated time per tic, seconds.
pub const TIC: f64 = 0.02;
