//! Planar primitives for the track ribbon: points, poses and the two segment
//! shapes with their projection and edge intersection routines.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector pointing along `heading`.
    pub fn unit(heading: f64) -> Self {
        let (s, c) = heading.sin_cos();
        Self { x: c, y: s }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z component of the 3D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Rotated a quarter turn counterclockwise.
    pub fn perp(self) -> Self {
        Self {
            x: -self.y,
            y: self.x,
        }
    }

    pub fn distance(self, o: Point) -> f64 {
        (self - o).norm()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Position plus heading (radians, counterclockwise from +x).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl Pose {
    pub const fn new(x: f64, y: f64, heading: f64) -> Self {
        Self { x, y, heading }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Wraps an angle into `[-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w == -PI && a > 0.0 {
        PI
    } else {
        w
    }
}

/// Shape of one track piece, independent of where it sits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SegmentShape {
    Straight { length: f64 },
    /// `sweep` is signed: positive turns left.
    Arc { radius: f64, sweep: f64 },
}

impl SegmentShape {
    pub fn length(&self) -> f64 {
        match *self {
            SegmentShape::Straight { length } => length,
            SegmentShape::Arc { radius, sweep } => radius * sweep.abs(),
        }
    }
}

/// Closest centerline point to a query, relative to one segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LocalProjection {
    /// Arc length from the segment start.
    pub along: f64,
    /// Signed offset, left positive.
    pub lateral: f64,
    pub distance: f64,
    pub heading: f64,
}

/// A segment placed on the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub shape: SegmentShape,
    pub start: Pose,
    /// Centerline distance from the start line to this segment's start.
    pub start_s: f64,
}

impl Segment {
    pub fn length(&self) -> f64 {
        self.shape.length()
    }

    /// Centerline pose `along` meters into the segment.
    pub fn pose_at(&self, along: f64) -> Pose {
        match self.shape {
            SegmentShape::Straight { .. } => {
                let p = self.start.position() + Point::unit(self.start.heading) * along;
                Pose::new(p.x, p.y, self.start.heading)
            }
            SegmentShape::Arc { radius, sweep } => {
                let turn = sweep.signum();
                let center = self.arc_center(radius, turn);
                let heading = self.start.heading + turn * along / radius;
                let p = center - Point::unit(heading).perp() * (turn * radius);
                Pose::new(p.x, p.y, heading)
            }
        }
    }

    pub fn end(&self) -> Pose {
        self.pose_at(self.length())
    }

    fn arc_center(&self, radius: f64, turn: f64) -> Point {
        self.start.position() + Point::unit(self.start.heading).perp() * (turn * radius)
    }

    pub(crate) fn project(&self, p: Point) -> LocalProjection {
        let length = self.length();
        let along = match self.shape {
            SegmentShape::Straight { .. } => {
                let d = Point::unit(self.start.heading);
                (p - self.start.position()).dot(d).clamp(0.0, length)
            }
            SegmentShape::Arc { radius, sweep } => {
                let turn = sweep.signum();
                let center = self.arc_center(radius, turn);
                let phi0 = angle_of(self.start.position() - center);
                let phi = angle_of(p - center);
                let delta = (turn * (phi - phi0)).rem_euclid(TAU);
                let span = sweep.abs();
                if delta <= span {
                    radius * delta
                } else if delta - span < TAU - delta {
                    length
                } else {
                    0.0
                }
            }
        };
        let foot = self.pose_at(along);
        let offset = p - foot.position();
        LocalProjection {
            along,
            lateral: offset.dot(Point::unit(foot.heading).perp()),
            distance: offset.norm(),
            heading: foot.heading,
        }
    }

    /// Smallest positive ray parameter at which `origin + t·dir` meets the
    /// edge lying `offset` meters left of the centerline.
    pub(crate) fn edge_hit(&self, offset: f64, origin: Point, dir: Point) -> Option<f64> {
        const EPS: f64 = 1e-9;
        match self.shape {
            SegmentShape::Straight { length } => {
                let along = Point::unit(self.start.heading);
                let a = self.start.position() + along.perp() * offset;
                let denom = dir.cross(along);
                if denom.abs() < 1e-15 {
                    return None;
                }
                let w = a - origin;
                let t = w.cross(along) / denom;
                let k = w.cross(dir) / denom;
                (t > EPS && (-1e-12..=length + 1e-12).contains(&k)).then_some(t)
            }
            SegmentShape::Arc { radius, sweep } => {
                let turn = sweep.signum();
                let center = self.arc_center(radius, turn);
                let edge_radius = radius - turn * offset;
                let phi0 = angle_of(self.start.position() - center);
                let rel = origin - center;
                let b = dir.dot(rel);
                let c = rel.dot(rel) - edge_radius * edge_radius;
                let disc = b * b - c;
                if disc < 0.0 {
                    return None;
                }
                let root = disc.sqrt();
                [-b - root, -b + root]
                    .into_iter()
                    .filter(|t| *t > EPS)
                    .find(|t| {
                        let hit = rel + dir * *t;
                        let delta = (turn * (angle_of(hit) - phi0)).rem_euclid(TAU);
                        delta <= sweep.abs() + 1e-12 || TAU - delta <= 1e-12
                    })
            }
        }
    }
}

fn angle_of(v: Point) -> f64 {
    v.y.atan2(v.x)
}
