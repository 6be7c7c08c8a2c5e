//! Shared race state read by the sensor model and advanced by the server.

use crate::physics::{CarParams, CarState, TIC};
use crate::track::TrackModel;

#[derive(Debug, Clone)]
pub struct World {
    pub track: TrackModel,
    pub params: CarParams,
    pub cars: Vec<CarState>,
    /// Cars still on track; retired or disconnected cars are excluded from
    /// contacts and opponent sensing.
    pub active: Vec<bool>,
    /// 1-based race position per car.
    pub race_pos: Vec<u32>,
    pub tic: u64,
}

impl World {
    pub fn new(track: TrackModel, params: CarParams, cars: Vec<CarState>) -> Self {
        let n = cars.len();
        let mut world = Self {
            track,
            params,
            cars,
            active: vec![true; n],
            race_pos: vec![1; n],
            tic: 0,
        };
        world.update_positions();
        world
    }

    /// Simulated seconds since the start of the current episode.
    pub fn sim_time(&self) -> f64 {
        self.tic as f64 * TIC
    }

    pub fn update_positions(&mut self) {
        self.race_pos = rank(&self.cars, &self.active);
    }
}

/// Race positions: active cars ahead of inactive ones, then by centerline
/// progress (which already folds in completed laps), ties by index.
pub fn rank(cars: &[CarState], active: &[bool]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..cars.len()).collect();
    order.sort_by(|&a, &b| {
        active[b]
            .cmp(&active[a])
            .then(cars[b].progress.total_cmp(&cars[a].progress))
            .then(a.cmp(&b))
    });
    let mut pos = vec![0; cars.len()];
    for (rank, idx) in order.into_iter().enumerate() {
        pos[idx] = rank as u32 + 1;
    }
    pos
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::CarParams;

    fn two_cars() -> (TrackModel, Vec<CarState>) {
        let track = TrackModel::parse(include_str!("../fixtures/tracks/oval.trk")).unwrap();
        let p = CarParams::default();
        let a = CarState::on_grid(&track, &p, 0.0);
        let b = CarState::on_grid(&track, &p, 10.0);
        (track, vec![a, b])
    }

    #[test]
    fn half_lap_ahead_leads() {
        let (track, mut cars) = two_cars();
        cars[1].progress = track.total_length() / 2.0;
        cars[0].progress = 10.0;
        assert_eq!(rank(&cars, &[true, true]), vec![2, 1]);
    }

    #[test]
    fn laps_dominate_position_on_track() {
        let (track, mut cars) = two_cars();
        cars[0].progress = track.total_length() + 5.0;
        cars[1].progress = track.total_length() - 5.0;
        assert_eq!(rank(&cars, &[true, true]), vec![1, 2]);
    }

    #[test]
    fn inactive_cars_rank_last() {
        let (_, mut cars) = two_cars();
        cars[0].progress = 500.0;
        assert_eq!(rank(&cars, &[false, true]), vec![2, 1]);
    }

    #[test]
    fn grid_order() {
        let (track, cars) = two_cars();
        let world = World::new(track, CarParams::default(), cars);
        assert_eq!(world.race_pos, vec![1, 2]);
        assert_eq!(world.sim_time(), 0.0);
    }
}
