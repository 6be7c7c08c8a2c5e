use std::path::Path;

use thiserror::Error;

/// The parameter set shipped with the crate.
pub const DEFAULT_PARAMS: &str = include_str!("../../fixtures/cars/default.params");

#[derive(Debug, Error)]
pub enum ParamsError {
    #[error("cannot read car parameters: {0}")]
    Io(#[from] std::io::Error),
    #[error("car parameters line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("car parameters: missing key `{0}`")]
    Missing(&'static str),
    #[error("car parameters: {0}")]
    Invalid(String),
}

/// One point of the engine torque curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorquePoint {
    pub rpm: f64,
    pub torque: f64,
}

/// Static description of the car.
///
/// Units are SI unless stated. Fuel and damage scales are placeholders with
/// no reference values behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct CarParams {
    pub mass: f64,
    pub wheel_radius: f64,
    pub wheelbase: f64,
    /// Distance from the rear axle to the center of mass.
    pub rear_axle_to_cg: f64,
    pub car_length: f64,
    pub car_width: f64,
    pub rpm_idle: f64,
    pub rpm_max: f64,
    /// Overall ratios (gearbox × final drive) for R, 1, …, 6.
    pub gear_ratios: [f64; 7],
    /// Piecewise-linear, sorted by rpm. Flat beyond both ends.
    pub torque_curve: Vec<TorquePoint>,
    /// Aerodynamic drag, N per (m/s)².
    pub drag: f64,
    /// Rolling resistance coefficient (fraction of weight).
    pub rolling_resistance: f64,
    /// Brake force at full pedal, N.
    pub max_brake_force: f64,
    /// Tyre friction coefficient capping traction, braking and cornering.
    pub grip: f64,
    /// Liters burned per MJ of engine work.
    pub fuel_per_mj: f64,
    pub initial_fuel: f64,
    pub damage_max: f64,
    /// Extra resistance off the track, as a fraction of weight.
    pub offtrack_drag: f64,
    /// Damage points per meter driven off the track.
    pub offtrack_damage: f64,
    /// Damage points per N·s of contact impulse.
    pub damage_per_impulse: f64,
    /// Static height of the center of mass above the track, m.
    pub ride_height: f64,
    /// Suspension natural frequency, Hz.
    pub suspension_hz: f64,
    pub suspension_damping: f64,
    /// Static squat per unit longitudinal acceleration, m per m/s².
    pub squat: f64,
    /// Rear slip ratio per unit of squared traction demand.
    pub slip_gain: f64,
}

impl Default for CarParams {
    fn default() -> Self {
        Self::parse(DEFAULT_PARAMS).expect("bundled car parameters are valid")
    }
}

impl CarParams {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ParamsError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses `key value…` lines; `#` starts a comment. Every key is required.
    pub fn parse(text: &str) -> Result<Self, ParamsError> {
        let mut entries: Vec<(usize, &str, Vec<&str>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let mut fields = line.split_whitespace();
            if let Some(key) = fields.next() {
                entries.push((idx + 1, key, fields.collect()));
            }
        }

        const KEYS: [&str; 25] = [
            "mass",
            "wheel_radius",
            "wheelbase",
            "rear_axle_to_cg",
            "car_length",
            "car_width",
            "rpm_idle",
            "rpm_max",
            "gear_ratios",
            "torque_curve",
            "drag",
            "rolling_resistance",
            "max_brake_force",
            "grip",
            "fuel_per_mj",
            "initial_fuel",
            "damage_max",
            "offtrack_drag",
            "offtrack_damage",
            "damage_per_impulse",
            "ride_height",
            "suspension_hz",
            "suspension_damping",
            "squat",
            "slip_gain",
        ];
        if let Some((line, key, _)) = entries.iter().find(|(_, k, _)| !KEYS.contains(k)) {
            return Err(ParamsError::Parse {
                line: *line,
                message: format!("unknown key `{key}`"),
            });
        }

        let lookup = |key: &'static str| {
            entries
                .iter()
                .rev()
                .find(|(_, k, _)| *k == key)
                .ok_or(ParamsError::Missing(key))
        };
        let number = |line: usize, token: &str| {
            token
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParamsError::Parse {
                    line,
                    message: format!("expected a number, found {token:?}"),
                })
        };
        let scalar = |key: &'static str| -> Result<f64, ParamsError> {
            let (line, _, values) = lookup(key)?;
            match values.as_slice() {
                [v] => number(*line, v),
                _ => Err(ParamsError::Parse {
                    line: *line,
                    message: format!("`{key}` takes exactly one value"),
                }),
            }
        };

        let (line, _, ratio_tokens) = lookup("gear_ratios")?;
        if ratio_tokens.len() != 7 {
            return Err(ParamsError::Parse {
                line: *line,
                message: "`gear_ratios` takes 7 values (R, 1..6)".into(),
            });
        }
        let mut gear_ratios = [0.0; 7];
        for (slot, tok) in gear_ratios.iter_mut().zip(ratio_tokens) {
            *slot = number(*line, tok)?;
        }

        let (line, _, curve_tokens) = lookup("torque_curve")?;
        let torque_curve = curve_tokens
            .iter()
            .map(|tok| {
                let (rpm, torque) = tok.split_once(':').ok_or_else(|| ParamsError::Parse {
                    line: *line,
                    message: format!("torque point {tok:?} is not `rpm:torque`"),
                })?;
                Ok(TorquePoint {
                    rpm: number(*line, rpm)?,
                    torque: number(*line, torque)?,
                })
            })
            .collect::<Result<Vec<_>, ParamsError>>()?;

        let params = Self {
            mass: scalar("mass")?,
            wheel_radius: scalar("wheel_radius")?,
            wheelbase: scalar("wheelbase")?,
            rear_axle_to_cg: scalar("rear_axle_to_cg")?,
            car_length: scalar("car_length")?,
            car_width: scalar("car_width")?,
            rpm_idle: scalar("rpm_idle")?,
            rpm_max: scalar("rpm_max")?,
            gear_ratios,
            torque_curve,
            drag: scalar("drag")?,
            rolling_resistance: scalar("rolling_resistance")?,
            max_brake_force: scalar("max_brake_force")?,
            grip: scalar("grip")?,
            fuel_per_mj: scalar("fuel_per_mj")?,
            initial_fuel: scalar("initial_fuel")?,
            damage_max: scalar("damage_max")?,
            offtrack_drag: scalar("offtrack_drag")?,
            offtrack_damage: scalar("offtrack_damage")?,
            damage_per_impulse: scalar("damage_per_impulse")?,
            ride_height: scalar("ride_height")?,
            suspension_hz: scalar("suspension_hz")?,
            suspension_damping: scalar("suspension_damping")?,
            squat: scalar("squat")?,
            slip_gain: scalar("slip_gain")?,
        };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<(), ParamsError> {
        let positive = [
            ("mass", self.mass),
            ("wheel_radius", self.wheel_radius),
            ("wheelbase", self.wheelbase),
            ("car_length", self.car_length),
            ("car_width", self.car_width),
            ("rpm_max", self.rpm_max),
            ("grip", self.grip),
            ("damage_max", self.damage_max),
            ("suspension_hz", self.suspension_hz),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| *v <= 0.0) {
            return Err(ParamsError::Invalid(format!("`{name}` must be positive, got {v}")));
        }
        if !(0.0..=self.wheelbase).contains(&self.rear_axle_to_cg) {
            return Err(ParamsError::Invalid(
                "`rear_axle_to_cg` must lie within the wheelbase".into(),
            ));
        }
        if !(0.0 <= self.rpm_idle && self.rpm_idle < self.rpm_max) {
            return Err(ParamsError::Invalid("need 0 <= rpm_idle < rpm_max".into()));
        }
        if self.gear_ratios.iter().any(|r| *r == 0.0) {
            return Err(ParamsError::Invalid("gear ratios must be nonzero".into()));
        }
        if self.gear_ratios[0] > 0.0 {
            return Err(ParamsError::Invalid("reverse ratio must be negative".into()));
        }
        if self.torque_curve.is_empty() {
            return Err(ParamsError::Invalid("torque curve is empty".into()));
        }
        if self.torque_curve.iter().any(|p| p.torque < 0.0) {
            return Err(ParamsError::Invalid("torque curve must be non-negative".into()));
        }
        if self.torque_curve.windows(2).any(|w| w[0].rpm >= w[1].rpm) {
            return Err(ParamsError::Invalid("torque curve rpm must increase".into()));
        }
        let non_negative = [
            self.drag,
            self.rolling_resistance,
            self.max_brake_force,
            self.fuel_per_mj,
            self.initial_fuel,
            self.offtrack_drag,
            self.offtrack_damage,
            self.damage_per_impulse,
            self.suspension_damping,
            self.slip_gain,
        ];
        if non_negative.iter().any(|v| *v < 0.0) {
            return Err(ParamsError::Invalid("resistance, fuel and damage coefficients must be non-negative".into()));
        }
        Ok(())
    }

    /// Overall ratio for `gear`; `0.0` in neutral.
    pub fn ratio(&self, gear: i8) -> f64 {
        match gear {
            -1 => self.gear_ratios[0],
            1..=6 => self.gear_ratios[gear as usize],
            _ => 0.0,
        }
    }

    /// Engine torque at `rpm`, linearly interpolated.
    pub fn torque_at(&self, rpm: f64) -> f64 {
        let curve = &self.torque_curve;
        let first = curve[0];
        let last = curve[curve.len() - 1];
        if rpm <= first.rpm {
            return first.torque;
        }
        if rpm >= last.rpm {
            return last.torque;
        }
        let i = curve.partition_point(|p| p.rpm <= rpm);
        let (a, b) = (curve[i - 1], curve[i]);
        a.torque + (b.torque - a.torque) * (rpm - a.rpm) / (b.rpm - a.rpm)
    }
}
