use std::f64::consts::TAU;

use crate::protocol::ActionFrame;
use crate::track::{wrap_angle, Point, TrackModel};

use super::{CarParams, CarState, RaceFlags, TIC};

const GRAVITY: f64 = 9.81;
/// First-order rate (1/s) at which a free-revving engine approaches its target.
const FREE_REV_RATE: f64 = 8.0;
const RPM_PER_RAD_S: f64 = 60.0 / TAU;

/// Kinematic-bicycle car model with a friction cap, stepped at a fixed tic.
#[derive(Debug, Clone)]
pub struct Dynamics {
    pub params: CarParams,
    pub flags: RaceFlags,
}

impl Dynamics {
    pub fn new(params: CarParams, flags: RaceFlags) -> Self {
        Self { params, flags }
    }

    /// Advances `state` by one tic under `action`.
    pub fn step(&self, state: &CarState, action: &ActionFrame, track: &TrackModel) -> CarState {
        let p = &self.params;
        let dt = TIC;
        let mut next = state.clone();

        let gear = action.gear.clamp(-1, 6);
        next.gear = gear;
        let accel = action.accel.clamp(0.0, 1.0);
        let brake = action.brake.clamp(0.0, 1.0);
        let clutch = action.clutch.clamp(0.0, 1.0);
        let engaged = 1.0 - clutch;
        let ratio = p.ratio(gear);
        let speed = state.speed();

        // Engine speed: locked to the wheels through the clutch, otherwise
        // free-revving toward a throttle-dependent target.
        let free_target = p.rpm_idle + accel * (p.rpm_max - p.rpm_idle);
        let free_rpm = state.rpm + (free_target - state.rpm) * (FREE_REV_RATE * dt).min(1.0);
        let rpm = if ratio == 0.0 || engaged == 0.0 {
            free_rpm
        } else {
            let wheel_rpm = (state.v_long / p.wheel_radius * ratio).abs() * RPM_PER_RAD_S;
            engaged * wheel_rpm.max(p.rpm_idle) + clutch * free_rpm
        };
        next.rpm = rpm.clamp(0.0, p.rpm_max);

        let has_fuel = self.flags.nofuel || state.fuel > 0.0;
        let torque = if has_fuel {
            p.torque_at(next.rpm) * accel
        } else {
            0.0
        };
        let grip_force = p.grip * p.mass * GRAVITY;
        let requested_drive = torque * engaged * ratio / p.wheel_radius;
        let drive = requested_drive.clamp(-grip_force, grip_force);

        if !self.flags.nofuel {
            let work_mj = torque * next.rpm / RPM_PER_RAD_S * dt / 1e6;
            next.fuel = (state.fuel - p.fuel_per_mj * work_mj).max(0.0);
        }

        let off_track = state.lateral.abs() > track.half_width();
        let mut resist = p.drag * speed * speed
            + (brake * p.max_brake_force).min(grip_force)
            + if speed != 0.0 {
                p.rolling_resistance * p.mass * GRAVITY
            } else {
                0.0
            };
        if off_track {
            resist += p.offtrack_drag * p.mass * GRAVITY;
        }

        // Drive first, then resistance pulling the speed toward zero without
        // crossing it.
        let driven = speed + drive / p.mass * dt;
        let decel = resist / p.mass * dt;
        let new_speed = if driven > 0.0 {
            (driven - decel).max(0.0)
        } else if driven < 0.0 {
            (driven + decel).min(0.0)
        } else {
            0.0
        };

        // Kinematic bicycle with the friction circle capping yaw rate.
        let wheel_angle = action.wheel_angle();
        let tan_delta = wheel_angle.tan();
        let beta = (p.rear_axle_to_cg / p.wheelbase * tan_delta).atan();
        let mut yaw_rate = new_speed * beta.cos() * tan_delta / p.wheelbase;
        if new_speed != 0.0 {
            let cap = p.grip * GRAVITY / new_speed.abs();
            yaw_rate = yaw_rate.clamp(-cap, cap);
        }
        next.yaw_rate = yaw_rate;
        next.pose.heading = wrap_angle(state.pose.heading + yaw_rate * dt);
        next.v_long = new_speed * beta.cos();
        next.v_lat = new_speed * beta.sin();
        let v = next.world_velocity();
        next.pose.x += v.x * dt;
        next.pose.y += v.y * dt;

        // Suspension proxy: a spring-damper pushed by longitudinal acceleration.
        let a_long = (new_speed - speed) / dt;
        let omega = TAU * p.suspension_hz;
        let z_acc = -omega * omega * state.z_offset
            - 2.0 * p.suspension_damping * omega * state.v_z
            - omega * omega * p.squat * a_long;
        next.v_z = state.v_z + z_acc * dt;
        next.z_offset = state.z_offset + next.v_z * dt;

        let front = next.v_long.abs() / p.wheel_radius;
        let demand = requested_drive.abs() / grip_force;
        let mut slip = p.slip_gain * demand * demand;
        if demand > 1.0 {
            slip += demand - 1.0;
        }
        let rear = (next.v_long.abs() + slip * next.v_long.abs().max(1.0)) / p.wheel_radius;
        next.wheel_spin = [front, front, rear, rear];

        if off_track {
            next.damage += p.offtrack_damage * new_speed.abs() * dt;
        }

        next.relocate(track);
        self.advance_progress(state, &mut next, track);
        next
    }

    fn advance_progress(&self, prev: &CarState, next: &mut CarState, track: &TrackModel) {
        let length = track.total_length();
        let mut ds = next.dist_from_start - prev.dist_from_start;
        if ds > length / 2.0 {
            ds -= length;
        } else if ds < -length / 2.0 {
            ds += length;
        }
        next.progress = prev.progress + ds;
        next.dist_raced = (next.progress - next.start_progress).max(0.0);
        next.cur_lap_time = prev.cur_lap_time + TIC;
        if next.progress >= f64::from(prev.lap_count + 1) * length {
            next.lap_count = prev.lap_count + 1;
            next.last_lap_time = next.cur_lap_time;
            next.best_lap_time = Some(match prev.best_lap_time {
                Some(best) => best.min(next.cur_lap_time),
                None => next.cur_lap_time,
            });
            next.cur_lap_time = 0.0;
        }
    }
}

/// Separates overlapping cars (treated as discs of the car's half length)
/// and exchanges momentum along the contact normal. Returns the number of
/// contacts resolved.
pub fn resolve_contacts(cars: &mut [CarState], active: &[bool], params: &CarParams) -> usize {
    let radius = params.car_length / 2.0;
    let restitution = 0.5;
    let mut contacts = 0;
    for i in 0..cars.len() {
        for j in (i + 1)..cars.len() {
            if !(active[i] && active[j]) {
                continue;
            }
            let delta = cars[j].position() - cars[i].position();
            let dist = delta.norm();
            if dist >= 2.0 * radius {
                continue;
            }
            contacts += 1;
            let normal = if dist > 1e-9 {
                delta * (1.0 / dist)
            } else {
                Point::unit(cars[i].pose.heading)
            };
            let push = (2.0 * radius - dist) / 2.0;
            cars[i].pose.x -= normal.x * push;
            cars[i].pose.y -= normal.y * push;
            cars[j].pose.x += normal.x * push;
            cars[j].pose.y += normal.y * push;

            let vi = cars[i].world_velocity();
            let vj = cars[j].world_velocity();
            let closing = (vi - vj).dot(normal);
            if closing > 0.0 {
                // Equal masses.
                let dv = (1.0 + restitution) / 2.0 * closing;
                cars[i].set_world_velocity(vi - normal * dv);
                cars[j].set_world_velocity(vj + normal * dv);
                let impulse = params.mass * dv;
                cars[i].damage += params.damage_per_impulse * impulse;
                cars[j].damage += params.damage_per_impulse * impulse;
            }
        }
    }
    contacts
}
