use std::process::ExitCode;

use scr::client::{parse_client_args, Driver, SimpleDriver};

const USAGE: &str = "usage: scr-client [simple] host:<ip> port:<p> id:<id> maxEpisodes:<n> \
maxSteps:<n> track:<name> stage:<0-3> verbose:<on|off>";

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let args = match parse_client_args(std::env::args().skip(1)) {
        Ok(args) => args,
        Err(e) => {
            eprintln!("{e}\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    if args.runner.verbose {
        log::set_max_level(log::LevelFilter::Info);
    }
    let mut driver: Box<dyn Driver> = match args.driver.as_deref() {
        None | Some("simple") => Box::new(SimpleDriver::new()),
        Some(other) => {
            eprintln!("unknown driver `{other}`\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    match args.runner.run(driver.as_mut()) {
        Ok(report) => {
            log::info!(
                "{} episode(s), steps {:?}, shutdown {}",
                report.episodes,
                report.steps,
                report.shutdown
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}
