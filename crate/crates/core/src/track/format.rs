//! Track file format.
//!
//! ```text
//! # comment
//! track <name> width <meters>
//! straight <length_m>
//! arc <radius_m> <degrees>      # positive degrees turn left
//! ```

use super::{SegmentShape, TrackError, TrackModel};

pub(super) fn parse(text: &str) -> Result<TrackModel, TrackError> {
    let mut header: Option<(String, f64)> = None;
    let mut shapes = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| TrackError::Parse {
            line: line_no,
            message,
        };
        let num = |token: &str| -> Result<f64, TrackError> {
            token
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("expected a number, found {token:?}")))
        };

        match fields.as_slice() {
            ["track", name, "width", width] => {
                if header.is_some() {
                    return Err(err("duplicate `track` header".into()));
                }
                header = Some((name.to_string(), num(width)?));
            }
            _ if header.is_none() => {
                return Err(err("expected `track <name> width <meters>` header".into()));
            }
            ["straight", length] => shapes.push(SegmentShape::Straight {
                length: num(length)?,
            }),
            ["arc", radius, degrees] => shapes.push(SegmentShape::Arc {
                radius: num(radius)?,
                sweep: num(degrees)?.to_radians(),
            }),
            _ => return Err(err(format!("unrecognized line {line:?}"))),
        }
    }

    let (name, width) = header.ok_or(TrackError::Parse {
        line: 0,
        message: "empty track file".into(),
    })?;
    TrackModel::new(name, width, shapes)
}
