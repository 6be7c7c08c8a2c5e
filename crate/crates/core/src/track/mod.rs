//! Flat, constant-width closed tracks built from straights and arcs.
//!
//! Conventions used everywhere in the crate: headings and sensor angles are
//! counterclockwise-positive, lateral offsets are left-positive, and the start
//! line sits at the origin facing `+x`.

mod format;
pub mod geometry;

use std::f64::consts::TAU;
use std::path::Path;

use thiserror::Error;

pub use geometry::{wrap_angle, Point, Pose, Segment, SegmentShape};

use crate::protocol::SENSOR_RANGE;

/// Closure tolerance on position, meters.
pub const CLOSURE_TOLERANCE_M: f64 = 1e-6;
/// Closure tolerance on heading, radians.
pub const CLOSURE_TOLERANCE_RAD: f64 = 1e-6;
/// `project` refuses points farther than this many track widths away.
pub const NEAR_TRACK_WIDTHS: f64 = 5.0;

#[derive(Debug, Error)]
pub enum TrackError {
    #[error("cannot read track file: {0}")]
    Io(#[from] std::io::Error),
    #[error("track file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("track does not close: end is {gap_m:.6} m and {gap_rad:.6} rad away from the start")]
    OpenLoop { gap_m: f64, gap_rad: f64 },
    #[error("invalid track geometry: {0}")]
    Geometry(String),
    #[error("point is {distance:.3} m from the centerline")]
    NotNearTrack { distance: f64 },
    #[error("ray origin is off the track")]
    OriginOffTrack,
}

/// Where a point sits relative to the centerline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    /// Centerline distance from the start line, in `[0, total_length)`.
    pub s: f64,
    /// Signed perpendicular offset, left positive.
    pub lateral: f64,
    /// Centerline heading at `s`.
    pub tangent_heading: f64,
    /// Unsigned distance to the centerline.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackModel {
    name: String,
    width: f64,
    segments: Vec<Segment>,
    total_length: f64,
}

impl TrackModel {
    /// Lays out `shapes` end to end from the origin and validates the loop.
    pub fn new(
        name: impl Into<String>,
        width: f64,
        shapes: impl IntoIterator<Item = SegmentShape>,
    ) -> Result<Self, TrackError> {
        let name = name.into();
        if !(width.is_finite() && width > 0.0) {
            return Err(TrackError::Geometry(format!("width must be positive, got {width}")));
        }
        let mut segments = Vec::new();
        let mut pose = Pose::default();
        let mut s = 0.0;
        for (i, shape) in shapes.into_iter().enumerate() {
            match shape {
                SegmentShape::Straight { length } if !(length.is_finite() && length > 0.0) => {
                    return Err(TrackError::Geometry(format!(
                        "segment {i}: straight length must be positive, got {length}"
                    )));
                }
                SegmentShape::Arc { radius, sweep } => {
                    if !(radius.is_finite() && radius > width / 2.0) {
                        return Err(TrackError::Geometry(format!(
                            "segment {i}: arc radius {radius} must exceed half the width ({})",
                            width / 2.0
                        )));
                    }
                    if !(sweep.is_finite() && sweep != 0.0) {
                        return Err(TrackError::Geometry(format!(
                            "segment {i}: arc angle must be nonzero"
                        )));
                    }
                }
                _ => {}
            }
            let seg = Segment {
                shape,
                start: pose,
                start_s: s,
            };
            pose = seg.end();
            s += seg.length();
            segments.push(seg);
        }
        if segments.is_empty() {
            return Err(TrackError::Geometry("track has no segments".into()));
        }
        let gap_m = pose.position().norm();
        let gap_rad = {
            let d = pose.heading.rem_euclid(TAU);
            d.min(TAU - d)
        };
        if gap_m > CLOSURE_TOLERANCE_M || gap_rad > CLOSURE_TOLERANCE_RAD {
            return Err(TrackError::OpenLoop { gap_m, gap_rad });
        }
        Ok(Self {
            name,
            width,
            segments,
            total_length: s,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TrackError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parses the line-oriented track format (see `format`).
    pub fn parse(text: &str) -> Result<Self, TrackError> {
        format::parse(text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn half_width(&self) -> f64 {
        self.width / 2.0
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Nearest centerline point, with no distance limit.
    pub fn nearest(&self, p: Point) -> Projection {
        let (seg, local) = self
            .segments
            .iter()
            .map(|seg| (seg, seg.project(p)))
            .min_by(|a, b| a.1.distance.total_cmp(&b.1.distance))
            .expect("track has at least one segment");
        Projection {
            s: self.wrap_s(seg.start_s + local.along),
            lateral: local.lateral,
            tangent_heading: wrap_angle(local.heading),
            distance: local.distance,
        }
    }

    /// Like [`TrackModel::nearest`] but only for points within five widths.
    pub fn project(&self, p: Point) -> Result<Projection, TrackError> {
        let proj = self.nearest(p);
        if proj.distance > NEAR_TRACK_WIDTHS * self.width {
            return Err(TrackError::NotNearTrack {
                distance: proj.distance,
            });
        }
        Ok(proj)
    }

    /// Wraps any centerline distance into `[0, total_length)`.
    pub fn wrap_s(&self, s: f64) -> f64 {
        let w = s.rem_euclid(self.total_length);
        if w >= self.total_length {
            0.0
        } else {
            w
        }
    }

    /// Centerline pose at distance `s` (wrapped).
    pub fn pose_at(&self, s: f64) -> Pose {
        let s = self.wrap_s(s);
        let idx = self
            .segments
            .partition_point(|seg| seg.start_s <= s)
            .saturating_sub(1);
        let seg = &self.segments[idx];
        seg.pose_at((s - seg.start_s).min(seg.length()))
    }

    /// The point `lateral` meters left of the centerline at `s`.
    pub fn embed(&self, s: f64, lateral: f64) -> Point {
        let pose = self.pose_at(s);
        pose.position() + Point::unit(pose.heading).perp() * lateral
    }

    /// Lateral offset normalized by half the width: `+1` left edge, `-1` right edge.
    pub fn track_pos(&self, lateral: f64) -> f64 {
        lateral / self.half_width()
    }

    /// Distance from `origin` along `direction` (radians) to the first track
    /// edge, capped at the sensor range.
    pub fn ray_to_edge(&self, origin: Point, direction: f64) -> Result<f64, TrackError> {
        let proj = self.nearest(origin);
        if proj.lateral.abs() >= self.half_width() {
            return Err(TrackError::OriginOffTrack);
        }
        Ok(self.cast_unchecked(origin, direction))
    }

    /// Ray cast without the on-track check.
    pub(crate) fn cast_unchecked(&self, origin: Point, direction: f64) -> f64 {
        let dir = Point::unit(direction);
        let hw = self.half_width();
        self.segments
            .iter()
            .flat_map(|seg| [seg.edge_hit(hw, origin, dir), seg.edge_hit(-hw, origin, dir)])
            .flatten()
            .fold(SENSOR_RANGE, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn oval() -> TrackModel {
        TrackModel::new(
            "oval",
            12.0,
            [
                SegmentShape::Straight { length: 500.0 },
                SegmentShape::Arc { radius: 100.0, sweep: PI },
                SegmentShape::Straight { length: 500.0 },
                SegmentShape::Arc { radius: 100.0, sweep: PI },
            ],
        )
        .unwrap()
    }

    #[test]
    fn oval_length() {
        let t = oval();
        assert!((t.total_length() - (1000.0 + 2.0 * PI * 100.0)).abs() < 1e-9);
    }

    #[test]
    fn full_circle() {
        let t = TrackModel::new("c", 10.0, [SegmentShape::Arc { radius: 100.0, sweep: TAU }]).unwrap();
        assert!((t.total_length() - TAU * 100.0).abs() < 1e-9);
    }

    #[test]
    fn open_loop_rejected() {
        let err = TrackModel::new(
            "bad",
            10.0,
            [
                SegmentShape::Straight { length: 100.0 },
                SegmentShape::Straight { length: 100.0 },
            ],
        )
        .unwrap_err();
        assert!(matches!(err, TrackError::OpenLoop { .. }));
    }

    #[test]
    fn geometry_errors() {
        let tight = TrackModel::new("t", 12.0, [SegmentShape::Arc { radius: 5.0, sweep: TAU }]);
        assert!(matches!(tight, Err(TrackError::Geometry(_))));
        let empty = TrackModel::new("e", 12.0, []);
        assert!(matches!(empty, Err(TrackError::Geometry(_))));
        let neg = TrackModel::new("n", -1.0, [SegmentShape::Arc { radius: 50.0, sweep: TAU }]);
        assert!(matches!(neg, Err(TrackError::Geometry(_))));
    }

    #[test]
    fn start_line_datum() {
        let p = oval().project(Point::new(0.0, 0.0)).unwrap();
        assert_eq!(p.s, 0.0);
        assert_eq!(p.lateral, 0.0);
        assert_eq!(p.tangent_heading, 0.0);
    }

    #[test]
    fn left_offset_on_straight() {
        let p = oval().project(Point::new(250.0, 3.0)).unwrap();
        assert!((p.s - 250.0).abs() < 1e-12);
        assert!((p.lateral - 3.0).abs() < 1e-12);
    }

    #[test]
    fn far_point_rejected() {
        let err = oval().project(Point::new(250.0, -100.0)).unwrap_err();
        assert!(matches!(err, TrackError::NotNearTrack { .. }));
    }

    #[test]
    fn track_pos_normalization() {
        let t = oval();
        assert_eq!(t.track_pos(0.0), 0.0);
        assert_eq!(t.track_pos(6.0), 1.0);
        assert_eq!(t.track_pos(-6.0), -1.0);
        assert_eq!(t.track_pos(-12.0), -2.0);
    }

    #[test]
    fn perpendicular_beam_hits_half_width() {
        let t = oval();
        let d = t.ray_to_edge(Point::new(250.0, 0.0), PI / 2.0).unwrap();
        assert!((d - 6.0).abs() < 1e-9);
        let d = t.ray_to_edge(Point::new(250.0, 0.0), -PI / 2.0).unwrap();
        assert!((d - 6.0).abs() < 1e-9);
    }

    #[test]
    fn beam_along_long_straight_is_capped() {
        let t = TrackModel::new(
            "long",
            10.0,
            [
                SegmentShape::Straight { length: 1000.0 },
                SegmentShape::Arc { radius: 100.0, sweep: PI },
                SegmentShape::Straight { length: 1000.0 },
                SegmentShape::Arc { radius: 100.0, sweep: PI },
            ],
        )
        .unwrap();
        assert_eq!(t.ray_to_edge(Point::new(100.0, 0.0), 0.0).unwrap(), SENSOR_RANGE);
    }

    #[test]
    fn off_track_origin() {
        let t = oval();
        assert!(matches!(
            t.ray_to_edge(Point::new(250.0, 7.0), 0.0),
            Err(TrackError::OriginOffTrack)
        ));
    }

    #[test]
    fn pose_at_wraps() {
        let t = oval();
        let a = t.pose_at(t.total_length() + 10.0);
        assert!((a.x - 10.0).abs() < 1e-9);
        let b = t.pose_at(-10.0);
        assert_eq!(b, t.pose_at(t.total_length() - 10.0));
        assert!(b.x < 0.0 && (b.position().norm() - 10.0).abs() < 0.01);
    }
}
