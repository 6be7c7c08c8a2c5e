//! Synthesis of a [`SensorFrame`] from the world.
//!
//! Range finders are cast from the car's center. Their angles, like every
//! angle in the crate, are counterclockwise-positive: `+90` looks out of the
//! car's left side. Opponent sector 0 covers bearings `[-180°, -170°)` and
//! sector 35 covers `[170°, 180°]`.

mod noise;

use serde::{Deserialize, Serialize};

pub use noise::{
    apply_noise, apply_noise_with, NoiseModel, NoiseSource, FOCUS_NOISE, OPPONENT_NOISE,
    TRACK_NOISE,
};

use crate::physics::speed_triplet;
use crate::protocol::{
    default_track_angles, SensorFrame, FOCUS_SENSORS, OPPONENT_SECTORS, SENSOR_RANGE,
    TRACK_SENSORS, UNRELIABLE,
};
use crate::track::wrap_angle;
use crate::world::World;

/// Minimum simulated time between two successful focus reads, seconds.
pub const FOCUS_COOLDOWN: f64 = 1.0;
/// Slack on the cooldown comparison absorbing tic-sum rounding.
const COOLDOWN_SLACK: f64 = 1e-9;
/// Width of one opponent sector, degrees.
pub const SECTOR_DEGREES: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorConfig {
    /// Range finder angles in degrees, counterclockwise from the car axis.
    pub track_angles: [f64; TRACK_SENSORS],
    pub noisy: bool,
    pub noise_seed: u64,
    pub noise_model: NoiseModel,
}

impl Default for SensorConfig {
    fn default() -> Self {
        Self {
            track_angles: default_track_angles(),
            noisy: false,
            noise_seed: 0,
            noise_model: NoiseModel::FractionOfRange,
        }
    }
}

/// When the focus beams were last delivered.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FocusState {
    pub last_used: Option<f64>,
}

impl FocusState {
    pub fn ready(&self, sim_time: f64) -> bool {
        match self.last_used {
            None => true,
            Some(t) => sim_time - t >= FOCUS_COOLDOWN - COOLDOWN_SLACK,
        }
    }
}

fn on_track(world: &World, car: usize) -> bool {
    let c = &world.cars[car];
    world.track.track_pos(c.lateral).abs() <= 1.0
}

fn cast(world: &World, car: usize, degrees: f64) -> f64 {
    let c = &world.cars[car];
    world
        .track
        .cast_unchecked(c.position(), c.pose.heading + degrees.to_radians())
}

/// The 19 range finders, noise-free. All `-1` when the car is off the track.
pub fn track_beams(world: &World, car: usize, angles: &[f64; TRACK_SENSORS]) -> [f64; TRACK_SENSORS] {
    if !on_track(world, car) {
        return [UNRELIABLE; TRACK_SENSORS];
    }
    angles.map(|a| cast(world, car, a))
}

/// Bearing of `target` seen from `car`, degrees in `[-180, 180]`.
pub fn bearing_degrees(world: &World, car: usize, target: usize) -> f64 {
    let c = &world.cars[car];
    let d = world.cars[target].position() - c.position();
    wrap_angle(d.y.atan2(d.x) - c.pose.heading).to_degrees()
}

/// Sector index for a bearing in degrees.
pub fn sector_of(bearing_degrees: f64) -> usize {
    let idx = ((bearing_degrees + 180.0) / SECTOR_DEGREES).floor();
    (idx.max(0.0) as usize).min(OPPONENT_SECTORS - 1)
}

/// Straight-line distance to the nearest active opponent in each 10° sector,
/// `200` where there is none within range.
pub fn opponent_sectors(world: &World, car: usize) -> [f64; OPPONENT_SECTORS] {
    let mut sectors = [SENSOR_RANGE; OPPONENT_SECTORS];
    let me = world.cars[car].position();
    for (other, state) in world.cars.iter().enumerate() {
        if other == car || !world.active[other] {
            continue;
        }
        let dist = me.distance(state.position());
        if dist > SENSOR_RANGE {
            continue;
        }
        let slot = &mut sectors[sector_of(bearing_degrees(world, car, other))];
        *slot = slot.min(dist);
    }
    sectors
}

/// Reads the five focus beams at `direction-2 … direction+2` degrees.
///
/// Returns five `-1` when the direction is outside `[-90, 90]`, the car is
/// off the track, or the cooldown has not elapsed. A rejected request leaves
/// the cooldown untouched.
pub fn focus_read(
    world: &World,
    car: usize,
    direction: f64,
    focus: &mut FocusState,
    sim_time: f64,
    noise: Option<(&mut NoiseSource, NoiseModel)>,
) -> [f64; FOCUS_SENSORS] {
    if !(-90.0..=90.0).contains(&direction) || !on_track(world, car) || !focus.ready(sim_time) {
        return [UNRELIABLE; FOCUS_SENSORS];
    }
    focus.last_used = Some(sim_time);
    let mut beams: [f64; FOCUS_SENSORS] =
        std::array::from_fn(|i| cast(world, car, direction + i as f64 - 2.0));
    if let Some((rng, model)) = noise {
        for b in &mut beams {
            *b = apply_noise_with(model, *b, FOCUS_NOISE, rng);
        }
    }
    beams
}

/// Builds one car's complete frame for the current tic.
pub fn build_frame(
    world: &World,
    car: usize,
    config: &SensorConfig,
    focus: &mut FocusState,
    focus_direction: f64,
    rng: &mut NoiseSource,
) -> SensorFrame {
    let c = &world.cars[car];
    let model = config.noise_model;

    let mut track = track_beams(world, car, &config.track_angles);
    let mut opponents = opponent_sectors(world, car);
    let focus_beams = focus_read(
        world,
        car,
        focus_direction,
        focus,
        world.sim_time(),
        config.noisy.then_some((&mut *rng, model)),
    );
    if config.noisy {
        for beam in &mut track {
            *beam = apply_noise_with(model, *beam, TRACK_NOISE, rng);
        }
        // Empty sectors stay at full range.
        for sector in opponents.iter_mut().filter(|s| **s < SENSOR_RANGE) {
            *sector = apply_noise_with(model, *sector, OPPONENT_NOISE, rng);
        }
    }

    let (speed_x, speed_y, speed_z) = speed_triplet(c);
    SensorFrame {
        angle: wrap_angle(c.pose.heading - c.track_heading),
        cur_lap_time: c.cur_lap_time,
        damage: c.damage,
        dist_from_start: c.dist_from_start,
        dist_raced: c.dist_raced,
        focus: focus_beams,
        fuel: c.fuel,
        gear: c.gear,
        last_lap_time: c.last_lap_time,
        opponents,
        race_pos: world.race_pos[car],
        rpm: c.rpm,
        speed_x,
        speed_y,
        speed_z,
        track,
        track_pos: world.track.track_pos(c.lateral),
        wheel_spin_vel: c.wheel_spin,
        z: c.z(&world.params),
    }
}

/// Per-car sensor state: configuration, focus cooldown and noise stream.
#[derive(Debug, Clone)]
pub struct SensorSuite {
    pub config: SensorConfig,
    pub focus: FocusState,
    car: usize,
    rng: NoiseSource,
}

impl SensorSuite {
    pub fn new(config: SensorConfig, car: usize) -> Self {
        let rng = NoiseSource::new(config.noise_seed, car, 0);
        Self {
            config,
            focus: FocusState::default(),
            car,
            rng,
        }
    }

    /// Clears the focus cooldown and rewinds the noise stream for a new episode.
    pub fn reset(&mut self, episode: u64) {
        self.focus = FocusState::default();
        self.rng = NoiseSource::new(self.config.noise_seed, self.car, episode);
    }

    pub fn frame(&mut self, world: &World, focus_direction: f64) -> SensorFrame {
        build_frame(
            world,
            self.car,
            &self.config,
            &mut self.focus,
            focus_direction,
            &mut self.rng,
        )
    }
}
