use super::wire;
use super::{ProtocolError, TRACK_SENSORS};

/// The default range finder fan: -90° to +90° every 10°.
pub fn default_track_angles() -> [f64; TRACK_SENSORS] {
    std::array::from_fn(|i| -90.0 + 10.0 * i as f64)
}

/// A client's identification datagram, `<id>(init a0 … a18)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitRequest {
    pub client_id: String,
    /// Range finder angles in degrees relative to the car axis.
    pub angles: [f64; TRACK_SENSORS],
}

impl InitRequest {
    pub fn new(client_id: impl Into<String>, angles: [f64; TRACK_SENSORS]) -> Self {
        Self {
            client_id: client_id.into(),
            angles,
        }
    }

    pub fn encode(&self) -> String {
        let mut out = self.client_id.clone();
        wire::push_group(&mut out, "init", &self.angles);
        out
    }

    pub fn parse(message: &str) -> Result<Self, ProtocolError> {
        let message = message.trim_matches(|c: char| c.is_ascii_whitespace() || c == '\0');
        let open = message
            .find('(')
            .ok_or_else(|| ProtocolError::Malformed("init without a group".into()))?;
        let client_id = &message[..open];
        if !valid_client_id(client_id) {
            return Err(ProtocolError::BadClientId(client_id.to_string()));
        }
        let groups = wire::split_groups(&message[open..])?;
        let [group] = groups.as_slice() else {
            return Err(ProtocolError::Malformed(format!(
                "init expects exactly one group, found {}",
                groups.len()
            )));
        };
        if group.name != "init" {
            return Err(ProtocolError::Malformed(format!(
                "expected `init`, found `{}`",
                group.name
            )));
        }
        if group.values.len() != TRACK_SENSORS {
            return Err(ProtocolError::BadAngleCount(group.values.len()));
        }
        let mut angles = [0.0; TRACK_SENSORS];
        for (slot, token) in angles.iter_mut().zip(&group.values) {
            let a = wire::quantize(wire::parse_number("init", token)?);
            if !(-90.0..=90.0).contains(&a) {
                return Err(ProtocolError::AngleOutOfRange(a));
            }
            *slot = a;
        }
        Ok(Self {
            client_id: client_id.to_string(),
            angles,
        })
    }
}

fn valid_client_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_graphic() && c != '(' && c != ')')
}
