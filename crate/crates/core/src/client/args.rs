//! `scr-client [driver] host:<ip> port:<p> id:<id> maxEpisodes:<n> maxSteps:<n>
//! track:<name> stage:<0-3> verbose:<on|off>`

use thiserror::Error;

use super::runner::EpisodeRunner;
use crate::protocol::Stage;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClientArgsError {
    #[error("unknown argument `{0}`")]
    UnknownKey(String),
    #[error("{key}: bad value `{value}`")]
    BadValue { key: String, value: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClientArgs {
    /// Optional leading bare token naming the driver to run.
    pub driver: Option<String>,
    pub runner: EpisodeRunner,
}

/// Parses the arguments after the program name. Keys may come in any order;
/// missing keys keep their defaults.
pub fn parse_client_args<I, S>(args: I) -> Result<ClientArgs, ClientArgsError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut runner = EpisodeRunner::default();
    let mut driver = None;
    for (i, arg) in args.into_iter().enumerate() {
        let arg = arg.as_ref();
        let Some((key, value)) = arg.split_once(':') else {
            if i == 0 {
                driver = Some(arg.to_string());
                continue;
            }
            return Err(ClientArgsError::UnknownKey(arg.to_string()));
        };
        let bad = || ClientArgsError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
        };
        match key {
            "host" if !value.is_empty() => runner.host = value.to_string(),
            "port" => runner.port = value.parse().map_err(|_| bad())?,
            "id" if !value.is_empty() && !value.contains(['(', ')']) => {
                runner.client_id = value.to_string()
            }
            "maxEpisodes" => {
                runner.max_episodes = value.parse().ok().filter(|n| *n >= 1).ok_or_else(bad)?
            }
            "maxSteps" => runner.max_steps = value.parse().map_err(|_| bad())?,
            "track" if !value.is_empty() => runner.track_name = value.to_string(),
            "stage" => {
                runner.stage = value
                    .parse()
                    .ok()
                    .and_then(Stage::from_code)
                    .ok_or_else(bad)?
            }
            "verbose" => {
                runner.verbose = match value {
                    "on" | "true" | "1" => true,
                    "off" | "false" | "0" => false,
                    _ => return Err(bad()),
                }
            }
            "host" | "id" | "track" => return Err(bad()),
            _ => return Err(ClientArgsError::UnknownKey(key.to_string())),
        }
    }
    Ok(ClientArgs { driver, runner })
}
