use serde::{Deserialize, Serialize};

use super::wire::{self, Group};
use super::{ProtocolError, FOCUS_SENSORS, OPPONENT_SECTORS, SENSOR_RANGE, TRACK_SENSORS, WHEELS};

/// Sensor names in wire order (ASCII-sorted).
pub const SENSOR_NAMES: [&str; 19] = [
    "angle",
    "curLapTime",
    "damage",
    "distFromStart",
    "distRaced",
    "focus",
    "fuel",
    "gear",
    "lastLapTime",
    "opponents",
    "racePos",
    "rpm",
    "speedX",
    "speedY",
    "speedZ",
    "track",
    "trackPos",
    "wheelSpinVel",
    "z",
];

/// Actuator names in wire order.
pub const ACTION_NAMES: [&str; 7] = ["accel", "brake", "clutch", "gear", "steer", "focus", "meta"];

/// Everything a driver perceives during one tic.
///
/// Distances are meters, times seconds, speeds km/h, angles radians.
/// Range finder entries hold `-1` when unreliable.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorFrame {
    /// Car heading minus track axis direction, in `[-π, π]`.
    pub angle: f64,
    pub cur_lap_time: f64,
    pub damage: f64,
    pub dist_from_start: f64,
    pub dist_raced: f64,
    pub focus: [f64; FOCUS_SENSORS],
    pub fuel: f64,
    /// `-1` reverse, `0` neutral, `1..=6` forward gears.
    pub gear: i8,
    pub last_lap_time: f64,
    pub opponents: [f64; OPPONENT_SECTORS],
    pub race_pos: u32,
    pub rpm: f64,
    pub speed_x: f64,
    pub speed_y: f64,
    pub speed_z: f64,
    pub track: [f64; TRACK_SENSORS],
    /// Lateral offset normalized by half the track width, `+1` on the left edge.
    pub track_pos: f64,
    pub wheel_spin_vel: [f64; WHEELS],
    pub z: f64,
}

impl Default for SensorFrame {
    fn default() -> Self {
        Self {
            angle: 0.0,
            cur_lap_time: 0.0,
            damage: 0.0,
            dist_from_start: 0.0,
            dist_raced: 0.0,
            focus: [0.0; FOCUS_SENSORS],
            fuel: 0.0,
            gear: 0,
            last_lap_time: 0.0,
            opponents: [0.0; OPPONENT_SECTORS],
            race_pos: 1,
            rpm: 0.0,
            speed_x: 0.0,
            speed_y: 0.0,
            speed_z: 0.0,
            track: [0.0; TRACK_SENSORS],
            track_pos: 0.0,
            wheel_spin_vel: [0.0; WHEELS],
            z: 0.0,
        }
    }
}

impl SensorFrame {
    /// A frame with no opponents in range and every beam at full range.
    pub fn clear_view() -> Self {
        Self {
            opponents: [SENSOR_RANGE; OPPONENT_SECTORS],
            track: [SENSOR_RANGE; TRACK_SENSORS],
            focus: [SENSOR_RANGE; FOCUS_SENSORS],
            ..Self::default()
        }
    }

    /// Rounds every real field to wire precision.
    pub fn quantized(&self) -> Self {
        let q = wire::quantize;
        Self {
            angle: q(self.angle),
            cur_lap_time: q(self.cur_lap_time),
            damage: q(self.damage),
            dist_from_start: q(self.dist_from_start),
            dist_raced: q(self.dist_raced),
            focus: self.focus.map(q),
            fuel: q(self.fuel),
            gear: self.gear,
            last_lap_time: q(self.last_lap_time),
            opponents: self.opponents.map(q),
            race_pos: self.race_pos,
            rpm: q(self.rpm),
            speed_x: q(self.speed_x),
            speed_y: q(self.speed_y),
            speed_z: q(self.speed_z),
            track: self.track.map(q),
            track_pos: q(self.track_pos),
            wheel_spin_vel: self.wheel_spin_vel.map(q),
            z: q(self.z),
        }
    }

    pub fn encode(&self) -> String {
        let mut out = String::with_capacity(1024);
        wire::push_group(&mut out, "angle", &[self.angle]);
        wire::push_group(&mut out, "curLapTime", &[self.cur_lap_time]);
        wire::push_group(&mut out, "damage", &[self.damage]);
        wire::push_group(&mut out, "distFromStart", &[self.dist_from_start]);
        wire::push_group(&mut out, "distRaced", &[self.dist_raced]);
        wire::push_group(&mut out, "focus", &self.focus);
        wire::push_group(&mut out, "fuel", &[self.fuel]);
        wire::push_int_group(&mut out, "gear", self.gear.into());
        wire::push_group(&mut out, "lastLapTime", &[self.last_lap_time]);
        wire::push_group(&mut out, "opponents", &self.opponents);
        wire::push_int_group(&mut out, "racePos", self.race_pos.into());
        wire::push_group(&mut out, "rpm", &[self.rpm]);
        wire::push_group(&mut out, "speedX", &[self.speed_x]);
        wire::push_group(&mut out, "speedY", &[self.speed_y]);
        wire::push_group(&mut out, "speedZ", &[self.speed_z]);
        wire::push_group(&mut out, "track", &self.track);
        wire::push_group(&mut out, "trackPos", &[self.track_pos]);
        wire::push_group(&mut out, "wheelSpinVel", &self.wheel_spin_vel);
        wire::push_group(&mut out, "z", &[self.z]);
        out
    }

    /// Decodes a sensor message. Group order is irrelevant, unknown groups are
    /// skipped and a repeated group overrides the earlier one.
    pub fn parse(message: &str) -> Result<Self, ProtocolError> {
        let mut frame = SensorFrame::default();
        let mut seen = [false; SENSOR_NAMES.len()];
        for group in wire::split_groups(message)? {
            let Some(idx) = SENSOR_NAMES.iter().position(|n| *n == group.name) else {
                continue;
            };
            seen[idx] = true;
            match group.name {
                "angle" => frame.angle = scalar(&group)?,
                "curLapTime" => frame.cur_lap_time = scalar(&group)?,
                "damage" => frame.damage = scalar(&group)?,
                "distFromStart" => frame.dist_from_start = scalar(&group)?,
                "distRaced" => frame.dist_raced = scalar(&group)?,
                "focus" => frame.focus = vector(&group)?,
                "fuel" => frame.fuel = scalar(&group)?,
                "gear" => frame.gear = integer(&group, -1, 6)? as i8,
                "lastLapTime" => frame.last_lap_time = scalar(&group)?,
                "opponents" => frame.opponents = vector(&group)?,
                "racePos" => frame.race_pos = integer(&group, 1, i64::from(u32::MAX))? as u32,
                "rpm" => frame.rpm = scalar(&group)?,
                "speedX" => frame.speed_x = scalar(&group)?,
                "speedY" => frame.speed_y = scalar(&group)?,
                "speedZ" => frame.speed_z = scalar(&group)?,
                "track" => frame.track = vector(&group)?,
                "trackPos" => frame.track_pos = scalar(&group)?,
                "wheelSpinVel" => frame.wheel_spin_vel = vector(&group)?,
                "z" => frame.z = scalar(&group)?,
                _ => unreachable!("name came from SENSOR_NAMES"),
            }
        }
        let missing: Vec<&'static str> = SENSOR_NAMES
            .iter()
            .zip(seen)
            .filter(|(_, s)| !s)
            .map(|(n, _)| *n)
            .collect();
        if !missing.is_empty() {
            return Err(ProtocolError::MissingSensors(missing));
        }
        Ok(frame)
    }
}

fn arity(group: &Group<'_>, expected: usize) -> Result<(), ProtocolError> {
    if group.values.len() != expected {
        return Err(ProtocolError::Arity {
            name: group.name.to_string(),
            expected,
            found: group.values.len(),
        });
    }
    Ok(())
}

fn scalar(group: &Group<'_>) -> Result<f64, ProtocolError> {
    arity(group, 1)?;
    Ok(wire::quantize(wire::parse_number(group.name, group.values[0])?))
}

fn vector<const N: usize>(group: &Group<'_>) -> Result<[f64; N], ProtocolError> {
    arity(group, N)?;
    let mut out = [0.0; N];
    for (slot, token) in out.iter_mut().zip(&group.values) {
        *slot = wire::quantize(wire::parse_number(group.name, token)?);
    }
    Ok(out)
}

fn integer(group: &Group<'_>, lo: i64, hi: i64) -> Result<i64, ProtocolError> {
    arity(group, 1)?;
    let v = wire::parse_number(group.name, group.values[0])?;
    if v.fract() != 0.0 || v < lo as f64 || v > hi as f64 {
        return Err(ProtocolError::BadNumber {
            name: group.name.to_string(),
            value: group.values[0].to_string(),
        });
    }
    Ok(v as i64)
}

/// Default focus request: outside `[-90, 90]`, so no focus beams are read
/// and the cooldown is never consumed.
pub const NO_FOCUS: f64 = 360.0;

/// One control decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionFrame {
    /// Gas pedal, `[0, 1]`.
    pub accel: f64,
    /// Brake pedal, `[0, 1]`.
    pub brake: f64,
    /// Clutch pedal, `[0, 1]`; `1` fully disengages the engine.
    pub clutch: f64,
    /// `-1..=6`.
    pub gear: i8,
    /// `-1` full right, `+1` full left.
    pub steering: f64,
    /// Focus direction in degrees relative to the car axis. Defaults to
    /// [`NO_FOCUS`], which asks for nothing.
    ///
    /// Kept as requested (not clamped) so that an out-of-range request can
    /// be answered with unreliable readings.
    pub focus: f64,
    /// Restart request.
    pub meta: bool,
}

impl Default for ActionFrame {
    fn default() -> Self {
        Self {
            accel: 0.0,
            brake: 0.0,
            clutch: 0.0,
            gear: 0,
            steering: 0.0,
            focus: NO_FOCUS,
            meta: false,
        }
    }
}

impl ActionFrame {
    /// An all-default action asking the server to restart the race.
    pub fn restart() -> Self {
        Self {
            meta: true,
            ..Self::default()
        }
    }

    /// Front wheel angle in radians, left positive.
    pub fn wheel_angle(&self) -> f64 {
        self.steering * super::STEER_LOCK
    }

    pub fn encode(&self) -> String {
        let mut out = String::with_capacity(96);
        wire::push_group(&mut out, "accel", &[self.accel]);
        wire::push_group(&mut out, "brake", &[self.brake]);
        wire::push_group(&mut out, "clutch", &[self.clutch]);
        wire::push_int_group(&mut out, "gear", self.gear.into());
        wire::push_group(&mut out, "steer", &[self.steering]);
        wire::push_group(&mut out, "focus", &[self.focus]);
        wire::push_int_group(&mut out, "meta", i64::from(self.meta));
        out
    }

    /// Decodes an action, clamping pedals and steering into range and
    /// truncating gear and meta toward zero. Missing groups keep defaults.
    pub fn parse(message: &str) -> Result<Self, ProtocolError> {
        let mut action = ActionFrame::default();
        for group in wire::split_groups(message)? {
            if !ACTION_NAMES.contains(&group.name) {
                continue;
            }
            let v = scalar(&group)?;
            match group.name {
                "accel" => action.accel = v.clamp(0.0, 1.0),
                "brake" => action.brake = v.clamp(0.0, 1.0),
                "clutch" => action.clutch = v.clamp(0.0, 1.0),
                "gear" => action.gear = v.trunc().clamp(-1.0, 6.0) as i8,
                "steer" => action.steering = v.clamp(-1.0, 1.0),
                "focus" => action.focus = v,
                "meta" => action.meta = v.trunc().clamp(0.0, 1.0) == 1.0,
                _ => unreachable!("name came from ACTION_NAMES"),
            }
        }
        Ok(action)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gear_echo() {
        let frame = SensorFrame {
            gear: -1,
            ..SensorFrame::default()
        };
        assert!(frame.encode().contains("(gear -1)"));
    }

    #[test]
    fn uniform_track_vector() {
        let frame = SensorFrame::clear_view();
        let text = frame.encode();
        let expected = format!("(track{})", " 200".repeat(19));
        assert!(text.contains(&expected), "{text}");
    }

    #[test]
    fn incomplete_frame_lists_missing() {
        let err = SensorFrame::parse("(gear 3)").unwrap_err();
        match &err {
            ProtocolError::MissingSensors(names) => {
                assert_eq!(names.len(), 18);
                assert_eq!(names[0], "angle");
                assert!(!names.contains(&"gear"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.is_malformed());
    }

    #[test]
    fn zero_frame_round_trips() {
        let zero = SensorFrame {
            race_pos: 1,
            ..SensorFrame::default()
        };
        assert_eq!(SensorFrame::parse(&zero.encode()).unwrap(), zero);
    }

    #[test]
    fn track_arity() {
        let text = SensorFrame::default()
            .encode()
            .replace(&format!("(track{})", " 0".repeat(19)), &format!("(track{})", " 0".repeat(18)));
        let err = SensorFrame::parse(&text).unwrap_err();
        assert!(err.to_string().contains("track arity"), "{err}");
    }

    #[test]
    fn parse_ignores_group_order_and_unknown_groups() {
        let frame = SensorFrame::clear_view();
        let text = frame.encode();
        let mut groups: Vec<String> = text
            .split_inclusive(')')
            .map(str::to_string)
            .collect();
        groups.reverse();
        groups.insert(3, "(future 1 2 3)".into());
        assert_eq!(SensorFrame::parse(&groups.concat()).unwrap(), frame);
    }

    #[test]
    fn bad_sensor_values() {
        let text = SensorFrame::default().encode().replace("(gear 0)", "(gear 7)");
        assert!(matches!(
            SensorFrame::parse(&text),
            Err(ProtocolError::BadNumber { .. })
        ));
        let text = SensorFrame::default().encode().replace("(rpm 0)", "(rpm fast)");
        assert!(matches!(
            SensorFrame::parse(&text),
            Err(ProtocolError::BadNumber { .. })
        ));
    }

    #[test]
    fn action_defaults_and_clamps() {
        assert_eq!(ActionFrame::parse("").unwrap(), ActionFrame::default());
        assert_eq!(ActionFrame::parse("(accel 1.7)").unwrap().accel, 1.0);
        assert_eq!(ActionFrame::parse("(brake -3)").unwrap().brake, 0.0);
        assert_eq!(ActionFrame::parse("(steer -1)").unwrap().steering, -1.0);
        assert_eq!(ActionFrame::parse("(steer 5)").unwrap().steering, 1.0);
        assert_eq!(ActionFrame::parse("(gear 2.9)").unwrap().gear, 2);
        assert_eq!(ActionFrame::parse("(gear -0.5)").unwrap().gear, 0);
        assert_eq!(ActionFrame::parse("(gear 9)").unwrap().gear, 6);
        assert_eq!(ActionFrame::parse("(gear -4)").unwrap().gear, -1);
        assert!(ActionFrame::parse("(meta 1)").unwrap().meta);
        assert!(!ActionFrame::parse("(meta 0.9)").unwrap().meta);
        assert_eq!(ActionFrame::parse("(focus 95)").unwrap().focus, 95.0);
    }

    #[test]
    fn action_errors() {
        assert!(ActionFrame::parse("(accel").is_err());
        assert!(ActionFrame::parse("(accel x)").is_err());
        assert!(ActionFrame::parse("(accel 1 2)").is_err());
    }

    #[test]
    fn steering_extremes_map_to_lock_angle() {
        let right = ActionFrame::parse("(steer -1)").unwrap();
        let left = ActionFrame::parse("(steer 1)").unwrap();
        assert_eq!(right.wheel_angle(), -0.366519);
        assert_eq!(left.wheel_angle(), 0.366519);
    }

    #[test]
    fn action_wire_layout() {
        let a = ActionFrame {
            accel: 0.5,
            brake: 0.0,
            clutch: 0.25,
            gear: 3,
            steering: -0.1,
            focus: 45.0,
            meta: false,
        };
        assert_eq!(
            a.encode(),
            "(accel 0.5)(brake 0)(clutch 0.25)(gear 3)(steer -0.1)(focus 45)(meta 0)"
        );
    }
}
