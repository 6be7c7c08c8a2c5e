use crate::track::{wrap_angle, Point, Pose, TrackModel};

use super::CarParams;

/// m/s to km/h.
pub const MS_TO_KMH: f64 = 3.6;

/// Full dynamic and race-progress state of one car.
///
/// Velocities are stored in m/s in the body frame (`v_long` forward,
/// `v_lat` to the left, `v_z` up); sensors convert to km/h.
#[derive(Debug, Clone, PartialEq)]
pub struct CarState {
    pub pose: Pose,
    pub v_long: f64,
    pub v_lat: f64,
    pub v_z: f64,
    pub yaw_rate: f64,
    pub rpm: f64,
    pub gear: i8,
    pub fuel: f64,
    pub damage: f64,
    /// Front-left, front-right, rear-left, rear-right, rad/s.
    pub wheel_spin: [f64; 4],
    pub dist_raced: f64,
    pub lap_count: u32,
    pub cur_lap_time: f64,
    pub last_lap_time: f64,
    pub best_lap_time: Option<f64>,
    /// Suspension deflection relative to the static ride height.
    pub z_offset: f64,
    /// Unwrapped centerline distance; grid slots behind the line start negative.
    pub progress: f64,
    pub start_progress: f64,
    /// Centerline distance from the start line, `[0, track length)`.
    pub dist_from_start: f64,
    /// Signed offset from the centerline, left positive.
    pub lateral: f64,
    /// Centerline heading at the car's projection.
    pub track_heading: f64,
}

impl CarState {
    /// A car at rest on the centerline, `behind` meters before the start line.
    pub fn on_grid(track: &TrackModel, params: &CarParams, behind: f64) -> Self {
        let pose = track.pose_at(-behind);
        let mut state = Self {
            pose: Pose::new(pose.x, pose.y, wrap_angle(pose.heading)),
            v_long: 0.0,
            v_lat: 0.0,
            v_z: 0.0,
            yaw_rate: 0.0,
            rpm: params.rpm_idle,
            gear: 0,
            fuel: params.initial_fuel,
            damage: 0.0,
            wheel_spin: [0.0; 4],
            dist_raced: 0.0,
            lap_count: 0,
            cur_lap_time: 0.0,
            last_lap_time: 0.0,
            best_lap_time: None,
            z_offset: 0.0,
            progress: -behind,
            start_progress: -behind,
            dist_from_start: 0.0,
            lateral: 0.0,
            track_heading: 0.0,
        };
        state.relocate(track);
        state
    }

    /// Refreshes the cached projection onto the centerline.
    pub fn relocate(&mut self, track: &TrackModel) {
        let proj = track.nearest(self.position());
        self.dist_from_start = proj.s;
        self.lateral = proj.lateral;
        self.track_heading = proj.tangent_heading;
    }

    /// Re-projects after an external displacement (a contact push) and
    /// carries the along-track part of it into progress and distance raced.
    pub fn relocate_after_push(&mut self, track: &TrackModel) {
        let length = track.total_length();
        let before = self.dist_from_start;
        self.relocate(track);
        let mut ds = self.dist_from_start - before;
        if ds > length / 2.0 {
            ds -= length;
        } else if ds < -length / 2.0 {
            ds += length;
        }
        self.progress += ds;
        self.dist_raced = (self.progress - self.start_progress).max(0.0);
    }

    pub fn position(&self) -> Point {
        self.pose.position()
    }

    /// Velocity in the world frame, m/s.
    pub fn world_velocity(&self) -> Point {
        let forward = Point::unit(self.pose.heading);
        forward * self.v_long + forward.perp() * self.v_lat
    }

    /// Sets the body-frame velocity from a world-frame one.
    pub fn set_world_velocity(&mut self, v: Point) {
        let forward = Point::unit(self.pose.heading);
        self.v_long = v.dot(forward);
        self.v_lat = v.dot(forward.perp());
    }

    /// Signed ground speed, negative when rolling backwards.
    pub fn speed(&self) -> f64 {
        let magnitude = self.v_long.hypot(self.v_lat);
        if self.v_long < 0.0 {
            -magnitude
        } else {
            magnitude
        }
    }

    /// Height of the center of mass above the track.
    pub fn z(&self, params: &CarParams) -> f64 {
        params.ride_height + self.z_offset
    }

    pub fn kinetic_energy(&self, params: &CarParams) -> f64 {
        0.5 * params.mass * (self.v_long * self.v_long + self.v_lat * self.v_lat)
    }
}

/// Body-frame `(speedX, speedY, speedZ)` in km/h.
pub fn speed_triplet(state: &CarState) -> (f64, f64, f64) {
    (
        state.v_long * MS_TO_KMH,
        state.v_lat * MS_TO_KMH,
        state.v_z * MS_TO_KMH,
    )
}
