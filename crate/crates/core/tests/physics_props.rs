mod common;

use common::*;
use proptest::prelude::*;
use scr::physics::{
    apply_removal_rules, CarParams, CarState, Dynamics, RaceFlags, RetireReason, Standing, MS_TO_KMH,
    speed_triplet,
};
use scr::protocol::{ActionFrame, STEER_LOCK};
use scr::track::wrap_angle;

fn dynamics(flags: RaceFlags) -> Dynamics {
    Dynamics::new(CarParams::default(), flags)
}

fn moving_car(speed: f64) -> (scr::track::TrackModel, CarState) {
    let track = oval();
    let mut car = CarState::on_grid(&track, &CarParams::default(), 0.0);
    car.pose.x = 100.0;
    car.v_long = speed;
    car.gear = 3;
    car.relocate(&track);
    (track, car)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coasting_never_gains_energy(speed in 0.0f64..60.0, brake in 0.0f64..=1.0, steer in -1.0f64..=1.0) {
        let (track, mut car) = moving_car(speed);
        let dy = dynamics(RaceFlags::default());
        let action = ActionFrame { brake, steering: steer, gear: 3, ..ActionFrame::default() };
        for _ in 0..50 {
            let next = dy.step(&car, &action, &track);
            prop_assert!(next.kinetic_energy(&dy.params) <= car.kinetic_energy(&dy.params) + 1e-9);
            car = next;
        }
    }

    #[test]
    fn stepping_is_deterministic(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let actions: Vec<ActionFrame> = (0..100).map(|_| random_action(&mut rng)).collect();
        let track = oval();
        let dy = dynamics(RaceFlags::default());
        let run = || {
            let mut car = CarState::on_grid(&track, &dy.params, 0.0);
            for a in &actions {
                car = dy.step(&car, a, &track);
            }
            car
        };
        let (a, b) = (run(), run());
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn flags_gate_each_removal_rule(fuel_out: bool, wrecked: bool, slow: bool, nofuel: bool, nodamage: bool, nolaptime: bool) {
        let track = oval();
        let params = CarParams::default();
        let mut car = CarState::on_grid(&track, &params, 0.0);
        if fuel_out { car.fuel = 0.0; }
        if wrecked { car.damage = params.damage_max; }
        if slow { car.cur_lap_time = 601.0; }
        let flags = RaceFlags { nofuel, nodamage, nolaptime, noisy: false };
        let expected = if fuel_out && !nofuel {
            Standing::Retired(RetireReason::Fuel)
        } else if wrecked && !nodamage {
            Standing::Retired(RetireReason::Damage)
        } else if slow && !nolaptime {
            Standing::Retired(RetireReason::LapTime)
        } else {
            Standing::Racing
        };
        prop_assert_eq!(apply_removal_rules(&car, &params, flags, 600.0), expected);
    }
}

#[test]
fn yaw_per_meter_matches_bicycle_geometry() {
    // Heading change per meter travelled is cos(beta) tan(delta) / wheelbase.
    let dy = dynamics(RaceFlags { nofuel: true, ..RaceFlags::default() });
    let p = &dy.params;
    for steer in [1.0, 0.5, -0.25, -1.0] {
        let (track, mut car) = moving_car(5.0);
        let delta: f64 = steer * STEER_LOCK;
        let beta = (p.rear_axle_to_cg / p.wheelbase * delta.tan()).atan();
        let curvature = beta.cos() * delta.tan() / p.wheelbase;
        let action = ActionFrame { steering: steer, gear: 0, ..ActionFrame::default() };
        let mut travelled = 0.0;
        let mut turned = 0.0;
        for _ in 0..20 {
            let next = dy.step(&car, &action, &track);
            travelled += next.position().distance(car.position());
            turned += wrap_angle(next.pose.heading - car.pose.heading);
            car = next;
        }
        assert!((turned / travelled - curvature).abs() < 1e-9, "steer {steer}");
        // Positive steering turns left (counterclockwise).
        assert_eq!(turned > 0.0, steer > 0.0);
    }
}

#[test]
fn full_lock_is_the_documented_angle() {
    let left = ActionFrame { steering: 1.0, ..ActionFrame::default() };
    let right = ActionFrame { steering: -1.0, ..ActionFrame::default() };
    assert_eq!(left.wheel_angle(), 0.366519);
    assert_eq!(right.wheel_angle(), -0.366519);
}

#[test]
fn lap_bookkeeping_around_the_oval() {
    let track = oval();
    let length = track.total_length();
    let dy = dynamics(RaceFlags::default());
    let mut car = CarState::on_grid(&track, &dy.params, 0.0);
    let mut rollovers = Vec::new();
    let mut tics = 0;
    while car.lap_count < 3 && tics < 20_000 {
        let speed_kmh = car.speed() * MS_TO_KMH;
        let steer = ((-0.5 * wrap_angle(car.pose.heading - car.track_heading)
            - 0.3 * car.lateral / track.half_width())
            / STEER_LOCK)
            .clamp(-1.0, 1.0);
        let action = ActionFrame {
            accel: if speed_kmh < 100.0 { 0.6 } else { 0.0 },
            gear: if speed_kmh < 60.0 { 1 } else { 2 },
            steering: steer,
            ..ActionFrame::default()
        };
        let next = dy.step(&car, &action, &track);
        if next.lap_count > car.lap_count {
            assert_eq!(next.cur_lap_time, 0.0);
            assert!((next.last_lap_time - (car.cur_lap_time + 0.02)).abs() < 1e-9);
            rollovers.push(next.dist_raced);
        } else {
            assert!(next.cur_lap_time > car.cur_lap_time);
        }
        assert!(next.dist_raced >= car.dist_raced - 1e-9);
        car = next;
        tics += 1;
    }
    assert_eq!(rollovers.len(), 3, "finished {} laps", car.lap_count);
    assert!((rollovers[0] - length).abs() < 1.0);
    for pair in rollovers.windows(2) {
        assert!((pair[1] - pair[0] - length).abs() < 1.0, "{pair:?}");
    }
    assert_eq!(car.damage, 0.0);
}

#[test]
fn speed_sensors_are_in_kmh() {
    let (_, car) = moving_car(10.0);
    let (x, y, z) = speed_triplet(&car);
    assert!((x - 36.0).abs() < 1e-12);
    assert_eq!(y, 0.0);
    assert_eq!(z, 0.0);
}
