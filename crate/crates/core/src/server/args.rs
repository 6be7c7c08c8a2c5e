//! `scr-server -r <race_config> [-t <timeout_ns>] [-noisy] [-nofuel] [-nodamage]
//! [-nolaptime] [--turbo] [--seed <u64>]`

use std::path::PathBuf;
use std::time::Duration;

use thiserror::Error;

use super::config::RaceConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArgsError {
    #[error("missing -r <race_config>")]
    MissingConfig,
    #[error("{0} needs a value")]
    MissingValue(&'static str),
    #[error("{flag}: bad value `{value}`")]
    BadValue { flag: &'static str, value: String },
    #[error("unknown argument `{0}`")]
    Unknown(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ServerArgs {
    pub race_config: PathBuf,
    pub timeout_ns: Option<u64>,
    pub noisy: bool,
    pub nofuel: bool,
    pub nodamage: bool,
    pub nolaptime: bool,
    pub turbo: bool,
    pub seed: Option<u64>,
}

pub const USAGE: &str = "usage: scr-server -r <race_config> [-t <timeout_ns>] [-noisy] \
[-nofuel] [-nodamage] [-nolaptime] [--turbo] [--seed <u64>]";

impl ServerArgs {
    /// Parses the arguments after the program name.
    pub fn parse<I, S>(args: I) -> Result<Self, ArgsError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = ServerArgs::default();
        let mut config = None;
        let mut it = args.into_iter().map(Into::into);
        while let Some(arg) = it.next() {
            match arg.as_str() {
                "-r" => config = Some(PathBuf::from(it.next().ok_or(ArgsError::MissingValue("-r"))?)),
                "-t" => out.timeout_ns = Some(number(&mut it, "-t")?),
                "--seed" => out.seed = Some(number(&mut it, "--seed")?),
                "-noisy" => out.noisy = true,
                "-nofuel" => out.nofuel = true,
                "-nodamage" => out.nodamage = true,
                "-nolaptime" => out.nolaptime = true,
                "--turbo" => out.turbo = true,
                _ => return Err(ArgsError::Unknown(arg)),
            }
        }
        out.race_config = config.ok_or(ArgsError::MissingConfig)?;
        Ok(out)
    }

    /// Command-line switches override the file: flags can only be turned on.
    pub fn apply(&self, config: &mut RaceConfig) {
        config.flags.noisy |= self.noisy;
        config.flags.nofuel |= self.nofuel;
        config.flags.nodamage |= self.nodamage;
        config.flags.nolaptime |= self.nolaptime;
        if self.turbo {
            config.realtime = false;
        }
        if let Some(ns) = self.timeout_ns {
            config.action_timeout = Duration::from_nanos(ns);
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
    }
}

fn number(it: &mut impl Iterator<Item = String>, flag: &'static str) -> Result<u64, ArgsError> {
    let value = it.next().ok_or(ArgsError::MissingValue(flag))?;
    value.parse().map_err(|_| ArgsError::BadValue { flag, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_command_line() {
        let a = ServerArgs::parse([
            "-r", "race.cfg", "-t", "20000000", "-noisy", "-nofuel", "-nodamage", "-nolaptime",
            "--turbo", "--seed", "7",
        ])
        .unwrap();
        assert_eq!(a.race_config, PathBuf::from("race.cfg"));
        assert_eq!(a.timeout_ns, Some(20_000_000));
        assert!(a.noisy && a.nofuel && a.nodamage && a.nolaptime && a.turbo);
        assert_eq!(a.seed, Some(7));

        let mut config = RaceConfig::practice("oval.trk", 1);
        a.apply(&mut config);
        assert_eq!(config.action_timeout, Duration::from_millis(20));
        assert!(!config.realtime && config.flags.nofuel);
        assert_eq!(config.seed, 7);
    }

    #[test]
    fn errors() {
        assert_eq!(ServerArgs::parse(Vec::<String>::new()), Err(ArgsError::MissingConfig));
        assert_eq!(ServerArgs::parse(["-r"]), Err(ArgsError::MissingValue("-r")));
        assert!(matches!(
            ServerArgs::parse(["-r", "x", "-t", "soon"]),
            Err(ArgsError::BadValue { flag: "-t", .. })
        ));
        assert_eq!(
            ServerArgs::parse(["-r", "x", "-fast"]),
            Err(ArgsError::Unknown("-fast".into()))
        );
    }
}
