use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::protocol::{SENSOR_RANGE, UNRELIABLE};

/// Noise σ of the 19 track range finders, as a fraction of the range.
pub const TRACK_NOISE: f64 = 0.10;
/// Noise σ of the opponent sectors, as a fraction of the range.
pub const OPPONENT_NOISE: f64 = 0.02;
/// Noise σ of the focus beams, as a fraction of the range.
pub const FOCUS_NOISE: f64 = 0.01;

/// How σ is derived from the configured fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    /// σ = fraction × 200 m, independent of the reading.
    #[default]
    FractionOfRange,
    /// σ = fraction × true reading.
    FractionOfReading,
}

/// Per-car Gaussian source. ChaCha is counter-based, so a given
/// `(seed, car, episode)` always yields the same draws.
#[derive(Debug, Clone)]
pub struct NoiseSource {
    rng: ChaCha8Rng,
}

impl NoiseSource {
    pub fn new(seed: u64, car: usize, episode: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ episode.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        rng.set_stream(car as u64);
        Self { rng }
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

/// Adds `N(0, σ)` to a range reading and clamps it to `[0, 200]`.
/// The `-1` sentinel passes through untouched.
pub fn apply_noise(true_value: f64, sigma_fraction: f64, rng: &mut NoiseSource) -> f64 {
    apply_noise_with(NoiseModel::FractionOfRange, true_value, sigma_fraction, rng)
}

pub fn apply_noise_with(
    model: NoiseModel,
    true_value: f64,
    sigma_fraction: f64,
    rng: &mut NoiseSource,
) -> f64 {
    if true_value == UNRELIABLE {
        return UNRELIABLE;
    }
    let sigma = match model {
        NoiseModel::FractionOfRange => sigma_fraction * SENSOR_RANGE,
        NoiseModel::FractionOfReading => sigma_fraction * true_value,
    };
    (true_value + sigma * rng.standard_normal()).clamp(0.0, SENSOR_RANGE)
}
