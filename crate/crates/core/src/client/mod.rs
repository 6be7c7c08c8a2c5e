//! Client SDK: implement [`Driver`], hand it to an [`EpisodeRunner`], and the
//! runner takes care of identification, the sensor/action loop, restarts
//! and shutdown.
//!
//! When `max_steps` is nonzero the driver sees that many frames per
//! episode; the next frame is answered with a restart request instead.

mod args;
mod driver;
mod runner;
mod simple;

pub use args::{parse_client_args, ClientArgs, ClientArgsError};
pub use driver::{Driver, NoObserver, Observer, Recorder, ScriptedDriver};
pub use runner::{ClientError, EpisodeRunner, RunReport, IDENTIFY_RETRY, MAX_SOCKET_ERRORS};
pub use simple::SimpleDriver;
