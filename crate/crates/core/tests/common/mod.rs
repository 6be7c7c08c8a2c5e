//! Independent oracles shared by the integration and acceptance suites.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, RngCore};
use scr::conformance::fixture_path;
use scr::physics::{CarParams, CarState};
use scr::protocol::{ActionFrame, SensorFrame, NO_FOCUS};
use scr::track::{Point, TrackModel};
use scr::world::World;

pub const OVAL_STRAIGHT: f64 = 500.0;
pub const OVAL_RADIUS: f64 = 100.0;
pub const OVAL_HALF_WIDTH: f64 = 6.0;

pub fn oval() -> TrackModel {
    TrackModel::load(fixture_path("tracks/oval.trk")).unwrap()
}

pub fn oval_length() -> f64 {
    2.0 * OVAL_STRAIGHT + 2.0 * PI * OVAL_RADIUS
}

/// Closed-form oval: east along y = 0, left half circle around (500, 100),
/// west along y = 200, left half circle around (0, 100). Left is positive.
pub fn oval_embed(s: f64, lateral: f64) -> Point {
    let arc = PI * OVAL_RADIUS;
    let s = s.rem_euclid(oval_length());
    let on_arc = |center: Point, start: f64, along: f64| {
        let phi = start + along / OVAL_RADIUS;
        let r = OVAL_RADIUS - lateral;
        Point::new(center.x + r * phi.cos(), center.y + r * phi.sin())
    };
    if s < OVAL_STRAIGHT {
        Point::new(s, lateral)
    } else if s < OVAL_STRAIGHT + arc {
        on_arc(Point::new(OVAL_STRAIGHT, OVAL_RADIUS), -FRAC_PI_2, s - OVAL_STRAIGHT)
    } else if s < 2.0 * OVAL_STRAIGHT + arc {
        let along = s - OVAL_STRAIGHT - arc;
        Point::new(OVAL_STRAIGHT - along, 2.0 * OVAL_RADIUS - lateral)
    } else {
        on_arc(Point::new(0.0, OVAL_RADIUS), FRAC_PI_2, s - 2.0 * OVAL_STRAIGHT - arc)
    }
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = Point::new(b.x - a.x, b.y - a.y);
    let ap = Point::new(p.x - a.x, p.y - a.y);
    let t = ((ap.x * ab.x + ap.y * ab.y) / (ab.x * ab.x + ab.y * ab.y)).clamp(0.0, 1.0);
    (ap.x - t * ab.x).hypot(ap.y - t * ab.y)
}

/// Unsigned distance from `p` to the oval centerline.
pub fn oval_centerline_distance(p: Point) -> f64 {
    let top = 2.0 * OVAL_RADIUS;
    let mut d = segment_distance(p, Point::new(0.0, 0.0), Point::new(OVAL_STRAIGHT, 0.0))
        .min(segment_distance(p, Point::new(0.0, top), Point::new(OVAL_STRAIGHT, top)));
    if p.x >= OVAL_STRAIGHT {
        d = d.min(((p.x - OVAL_STRAIGHT).hypot(p.y - OVAL_RADIUS) - OVAL_RADIUS).abs());
    }
    if p.x <= 0.0 {
        d = d.min((p.x.hypot(p.y - OVAL_RADIUS) - OVAL_RADIUS).abs());
    }
    d
}

/// Brute force: step 1 cm along the ray until the point leaves the oval.
pub fn march_ray(origin: Point, direction: f64) -> f64 {
    const STEP: f64 = 0.01;
    let (dx, dy) = (direction.cos(), direction.sin());
    let mut t = 0.0;
    while t < 200.0 {
        t += STEP;
        let p = Point::new(origin.x + t * dx, origin.y + t * dy);
        if oval_centerline_distance(p) >= OVAL_HALF_WIDTH {
            return t;
        }
    }
    200.0
}

/// A world on the oval with `cars` cars on the grid.
pub fn oval_world(cars: usize) -> World {
    let track = oval();
    let params = CarParams::default();
    let states = (0..cars)
        .map(|i| CarState::on_grid(&track, &params, 10.0 * i as f64))
        .collect();
    World::new(track, params, states)
}

pub fn place(world: &mut World, car: usize, x: f64, y: f64, heading: f64) {
    let c = &mut world.cars[car];
    c.pose.x = x;
    c.pose.y = y;
    c.pose.heading = heading;
    c.relocate(&world.track);
}

/// Sample mean and standard deviation (n - 1 denominator).
pub fn mean_sd(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn range(rng: &mut impl RngCore) -> f64 {
    if rng.random_bool(0.1) {
        -1.0
    } else {
        rng.random_range(0.0..=200.0)
    }
}

/// A random frame inside every documented range, at wire precision.
pub fn random_sensor_frame(rng: &mut impl RngCore) -> SensorFrame {
    let frame = SensorFrame {
        angle: rng.random_range(-PI..=PI),
        cur_lap_time: rng.random_range(0.0..600.0),
        damage: rng.random_range(0.0..20_000.0),
        dist_from_start: rng.random_range(0.0..5000.0),
        dist_raced: rng.random_range(0.0..100_000.0),
        focus: std::array::from_fn(|_| range(rng)),
        fuel: rng.random_range(0.0..100.0),
        gear: rng.random_range(-1..=6),
        last_lap_time: rng.random_range(0.0..600.0),
        opponents: std::array::from_fn(|_| rng.random_range(0.0..=200.0)),
        race_pos: rng.random_range(1..=10),
        rpm: rng.random_range(0.0..10_000.0),
        speed_x: rng.random_range(-100.0..350.0),
        speed_y: rng.random_range(-50.0..50.0),
        speed_z: rng.random_range(-20.0..20.0),
        track: std::array::from_fn(|_| range(rng)),
        track_pos: rng.random_range(-3.0..3.0),
        wheel_spin_vel: std::array::from_fn(|_| rng.random_range(0.0..400.0)),
        z: rng.random_range(-1.0..2.0),
    };
    frame.quantized()
}

/// A random in-range action at wire precision; focus sometimes out of range.
pub fn random_action(rng: &mut impl RngCore) -> ActionFrame {
    let q = scr::protocol::wire::quantize;
    ActionFrame {
        accel: q(rng.random_range(0.0..=1.0)),
        brake: q(rng.random_range(0.0..=1.0)),
        clutch: q(rng.random_range(0.0..=1.0)),
        gear: rng.random_range(-1..=6),
        steering: q(rng.random_range(-1.0..=1.0)),
        focus: if rng.random_bool(0.2) {
            NO_FOCUS
        } else {
            q(rng.random_range(-120.0..=120.0))
        },
        meta: rng.random_bool(0.05),
    }
}
