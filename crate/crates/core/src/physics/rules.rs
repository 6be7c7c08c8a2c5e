use serde::{Deserialize, Serialize};

use super::{CarParams, CarState};

/// Lap-time limit before any lap has been completed, seconds.
pub const FIRST_LAP_TIME_LIMIT: f64 = 600.0;
/// Lap-time limit as a multiple of the best lap completed so far.
pub const LAP_TIME_LIMIT_FACTOR: f64 = 10.0;

/// Command-line switches that alter the simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RaceFlags {
    pub nofuel: bool,
    pub nodamage: bool,
    pub nolaptime: bool,
    pub noisy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RetireReason {
    Fuel,
    Damage,
    LapTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Standing {
    Racing,
    Retired(RetireReason),
}

/// Lap-time limit given the best lap known so far.
pub fn lap_time_limit(best_known_lap: Option<f64>) -> f64 {
    best_known_lap.map_or(FIRST_LAP_TIME_LIMIT, |best| LAP_TIME_LIMIT_FACTOR * best)
}

/// Decides whether a car is still allowed to race. Fuel is checked first,
/// then damage, then lap time.
pub fn apply_removal_rules(
    state: &CarState,
    params: &CarParams,
    flags: RaceFlags,
    lap_time_limit: f64,
) -> Standing {
    if !flags.nofuel && state.fuel <= 0.0 {
        Standing::Retired(RetireReason::Fuel)
    } else if !flags.nodamage && state.damage >= params.damage_max {
        Standing::Retired(RetireReason::Damage)
    } else if !flags.nolaptime && state.cur_lap_time > lap_time_limit {
        Standing::Retired(RetireReason::LapTime)
    } else {
        Standing::Racing
    }
}
