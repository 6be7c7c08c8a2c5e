use super::driver::Driver;
use crate::protocol::{ActionFrame, SensorFrame, Stage, STEER_LOCK};

/// Steering gain on the heading error, radians of wheel per radian.
pub const ANGLE_GAIN: f64 = 0.5;
/// Steering gain on the normalized lateral offset, radians of wheel.
pub const POSITION_GAIN: f64 = 0.3;
/// Target speed with a clear view ahead, km/h.
pub const MAX_SPEED: f64 = 110.0;
/// Target speed with the edge right in front, km/h.
pub const MIN_SPEED: f64 = 60.0;
/// Extra target speed per meter of free road ahead, km/h.
pub const SPEED_PER_METER: f64 = 0.5;
pub const UPSHIFT_RPM: f64 = 7000.0;
pub const DOWNSHIFT_RPM: f64 = 3000.0;
/// Pedal per km/h of speed error.
pub const THROTTLE_GAIN: f64 = 0.1;
pub const BRAKE_GAIN: f64 = 0.05;
/// Frames over which the starting clutch is released.
pub const CLUTCH_FRAMES: u32 = 25;
/// Throttle while recovering from an excursion off the track.
pub const RECOVERY_ACCEL: f64 = 0.3;

/// A centering controller with a speed target taken from the free road
/// ahead. Deterministic; tuned only far enough to lap the bundled tracks.
///
/// The heading term steers against `angle` because `angle` is positive when
/// the car points left of the track axis.
#[derive(Debug, Clone, Default)]
pub struct SimpleDriver {
    frames: u32,
    pub stage: Stage,
    pub track_name: String,
}

impl SimpleDriver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn steering(angle: f64, track_pos: f64) -> f64 {
        ((-ANGLE_GAIN * angle - POSITION_GAIN * track_pos) / STEER_LOCK).clamp(-1.0, 1.0)
    }

    pub fn target_speed(frame: &SensorFrame) -> f64 {
        let ahead = frame.track[8].max(frame.track[9]).max(frame.track[10]);
        (MIN_SPEED + SPEED_PER_METER * ahead.max(0.0)).min(MAX_SPEED)
    }

    pub fn gear(frame: &SensorFrame) -> i8 {
        let gear = frame.gear;
        if gear < 1 {
            1
        } else if frame.rpm > UPSHIFT_RPM && gear < 6 {
            gear + 1
        } else if frame.rpm < DOWNSHIFT_RPM && gear > 1 {
            gear - 1
        } else {
            gear
        }
    }
}

impl Driver for SimpleDriver {
    fn drive(&mut self, frame: &SensorFrame) -> ActionFrame {
        let clutch = f64::from(CLUTCH_FRAMES.saturating_sub(self.frames)) / f64::from(CLUTCH_FRAMES) * 0.5;
        self.frames += 1;

        if frame.track_pos.abs() > 1.0 {
            // Point back toward the axis at a shallow angle and crawl in.
            let wanted = -frame.track_pos.signum() * 0.3;
            return ActionFrame {
                accel: RECOVERY_ACCEL,
                gear: 1,
                clutch,
                steering: ((wanted - frame.angle) / STEER_LOCK).clamp(-1.0, 1.0),
                ..ActionFrame::default()
            };
        }

        let error = Self::target_speed(frame) - frame.speed_x;
        ActionFrame {
            accel: (THROTTLE_GAIN * error).clamp(0.0, 1.0),
            brake: (-BRAKE_GAIN * error).clamp(0.0, 1.0),
            clutch,
            gear: Self::gear(frame),
            steering: Self::steering(frame.angle, frame.track_pos),
            ..ActionFrame::default()
        }
    }

    fn on_restart(&mut self) {
        self.frames = 0;
    }

    fn set_race_info(&mut self, stage: Stage, track_name: &str) {
        self.stage = stage;
        self.track_name = track_name.to_string();
    }
}
