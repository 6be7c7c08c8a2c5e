mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scr::protocol::wire::{format_number, quantize};
use scr::protocol::{
    classify, default_track_angles, parse_action, parse_init, parse_sensors, ActionFrame,
    InitRequest, MessageKind, SensorFrame, ACTION_NAMES, SENSOR_NAMES, STEER_LOCK,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sensor_frames_round_trip(seed in any::<u64>()) {
        let frame = common::random_sensor_frame(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(parse_sensors(&frame.encode()).unwrap(), frame);
    }

    #[test]
    fn actions_round_trip(seed in any::<u64>()) {
        let action = common::random_action(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(parse_action(&action.encode()).unwrap(), action);
    }

    #[test]
    fn clamping_is_idempotent(
        accel in -1e3f64..1e3,
        brake in -1e3f64..1e3,
        clutch in -1e3f64..1e3,
        gear in -50.0f64..50.0,
        steer in -1e3f64..1e3,
        meta in -5.0f64..5.0,
    ) {
        let text = format!(
            "(accel {accel})(brake {brake})(clutch {clutch})(gear {gear})(steer {steer})(meta {meta})"
        );
        let once = parse_action(&text).unwrap();
        prop_assert!((0.0..=1.0).contains(&once.accel));
        prop_assert!((0.0..=1.0).contains(&once.brake));
        prop_assert!((0.0..=1.0).contains(&once.clutch));
        prop_assert!((-1..=6).contains(&once.gear));
        prop_assert!((-1.0..=1.0).contains(&once.steering));
        prop_assert!(once.wheel_angle().abs() <= STEER_LOCK);
        prop_assert_eq!(parse_action(&once.encode()).unwrap(), once);
    }

    #[test]
    fn group_order_is_irrelevant(seed in any::<u64>(), rotate in 0usize..19) {
        let frame = common::random_sensor_frame(&mut ChaCha8Rng::seed_from_u64(seed));
        let text = frame.encode();
        let mut groups: Vec<&str> = text.split_inclusive(')').collect();
        groups.rotate_left(rotate);
        groups.reverse();
        prop_assert_eq!(parse_sensors(&groups.concat()).unwrap(), frame);
    }

    #[test]
    fn parsers_never_panic(text in "\\PC{0,200}") {
        let _ = parse_sensors(&text);
        let _ = parse_action(&text);
        let _ = parse_init(&text);
        let _ = classify(&text);
    }

    #[test]
    fn groupish_garbage_never_panics(text in "[()a-z0-9 .eE+-]{0,120}") {
        let _ = parse_sensors(&text);
        let _ = parse_action(&text);
        let _ = parse_init(&text);
    }

    #[test]
    fn numbers_keep_six_digits(v in -1e9f64..1e9) {
        let printed = format_number(v);
        let back: f64 = printed.parse().unwrap();
        prop_assert_eq!(back, quantize(v));
        prop_assert_eq!(quantize(back), back);
        let mantissa = printed.split(['e', 'E']).next().unwrap().replace(['-', '.'], "");
        let significant = mantissa.trim_start_matches('0').trim_end_matches('0');
        prop_assert!(significant.len() <= 6, "{}", printed);
    }

    #[test]
    fn init_round_trip(angles in proptest::array::uniform19(-90.0f64..=90.0), id in "[A-Za-z0-9_]{1,12}") {
        let req = InitRequest::new(id, angles.map(quantize));
        prop_assert_eq!(parse_init(&req.encode()).unwrap(), req);
    }
}

#[test]
fn every_name_is_emitted() {
    let sensors = SensorFrame::default().encode();
    for name in SENSOR_NAMES {
        assert!(sensors.contains(&format!("({name} ")), "{name}");
    }
    let action = ActionFrame::default().encode();
    for name in ACTION_NAMES {
        assert!(action.contains(&format!("({name} ")), "{name}");
    }
}

#[test]
fn control_literals_are_not_data() {
    assert_eq!(classify("***identified***"), MessageKind::Identified);
    assert_eq!(classify("***shutdown***"), MessageKind::Shutdown);
    assert_eq!(classify("***restart***"), MessageKind::Restart);
    assert_eq!(classify(&SensorFrame::default().encode()), MessageKind::Data);
}

#[test]
fn default_grid_init() {
    let text = InitRequest::new("SCR", default_track_angles()).encode();
    assert_eq!(
        text,
        "SCR(init -90 -80 -70 -60 -50 -40 -30 -20 -10 0 10 20 30 40 50 60 70 80 90)"
    );
}
