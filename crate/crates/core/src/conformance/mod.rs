//! Test harness shared by the integration and acceptance suites: the golden
//! wire corpus, loopback races and the scripted slow client.

mod golden;
mod scenario;

pub use golden::{
    bundled_corpus, evaluate, load_corpus, run_wire_conformance, uncovered_names, CaseKind,
    ConformanceReport, Expectation, GoldenCase, Mismatch, GOLDEN_WIRE,
};
pub use scenario::{
    fixture_path, run_loopback, run_loopback_with, run_slow_client_scenario, ClientRun, DelayedDriver,
    SlowClientReport, LOOPBACK_PATIENCE,
};
