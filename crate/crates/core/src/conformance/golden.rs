use std::fmt;

use serde::{Deserialize, Serialize};

use crate::protocol::{
    classify, parse_action, parse_init, parse_sensors, wire, MessageKind, ProtocolError,
    ACTION_NAMES, SENSOR_NAMES,
};

/// The bundled corpus.
pub const GOLDEN_WIRE: &str = include_str!("../../fixtures/golden/wire.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    Sensors,
    Action,
    Init,
    Control,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    /// Parses, and re-encodes to exactly this text.
    Encoded(String),
    /// Fails with this [`ProtocolError::code`].
    Error(String),
    /// Classifies as `identified`, `shutdown`, `restart` or `data`.
    Control(String),
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Encoded(text) => write!(f, "encoded {text}"),
            Expectation::Error(code) => write!(f, "error {code}"),
            Expectation::Control(kind) => write!(f, "control {kind}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCase {
    pub name: String,
    pub kind: CaseKind,
    pub input: String,
    pub expect: Expectation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub name: String,
    pub expected: Expectation,
    pub actual: Expectation,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case {}:", self.name)?;
        writeln!(f, "  - {}", self.expected)?;
        write!(f, "  + {}", self.actual)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConformanceReport {
    pub passed: usize,
    pub failures: Vec<Mismatch>,
}

impl ConformanceReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ConformanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} passed, {} failed", self.passed, self.failures.len())?;
        for m in &self.failures {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}

pub fn load_corpus(json: &str) -> Result<Vec<GoldenCase>, serde_json::Error> {
    serde_json::from_str(json)
}

pub fn bundled_corpus() -> Vec<GoldenCase> {
    load_corpus(GOLDEN_WIRE).expect("bundled corpus is valid JSON")
}

fn outcome(result: Result<String, ProtocolError>) -> Expectation {
    match result {
        Ok(text) => Expectation::Encoded(text),
        Err(e) => Expectation::Error(e.code().to_string()),
    }
}

/// What the protocol layer actually does with a case's input.
pub fn evaluate(case: &GoldenCase) -> Expectation {
    let input = case.input.as_str();
    match case.kind {
        CaseKind::Sensors => outcome(parse_sensors(input).map(|f| f.encode())),
        CaseKind::Action => outcome(parse_action(input).map(|a| a.encode())),
        CaseKind::Init => outcome(parse_init(input).map(|i| i.encode())),
        CaseKind::Control => Expectation::Control(
            match classify(input) {
                MessageKind::Identified => "identified",
                MessageKind::Shutdown => "shutdown",
                MessageKind::Restart => "restart",
                MessageKind::Data => "data",
            }
            .to_string(),
        ),
    }
}

/// Replays every case; any disagreement is reported with both sides.
pub fn run_wire_conformance(corpus: &[GoldenCase]) -> ConformanceReport {
    let mut report = ConformanceReport::default();
    for case in corpus {
        let actual = evaluate(case);
        if actual == case.expect {
            report.passed += 1;
        } else {
            report.failures.push(Mismatch {
                name: case.name.clone(),
                expected: case.expect.clone(),
                actual,
            });
        }
    }
    report
}

/// Sensor and actuator names that no case's input mentions as a group.
pub fn uncovered_names(corpus: &[GoldenCase]) -> Vec<&'static str> {
    let mut seen = std::collections::HashSet::new();
    for case in corpus {
        let start = case.input.find('(').unwrap_or(case.input.len());
        if let Ok(groups) = wire::split_groups(&case.input[start..]) {
            seen.extend(groups.iter().map(|g| g.name.to_string()));
        } else {
            // Truncated inputs still count for the complete groups they hold.
            for chunk in case.input.split('(').skip(1) {
                if let Some(name) = chunk.split_whitespace().next() {
                    seen.insert(name.trim_end_matches(')').to_string());
                }
            }
        }
    }
    SENSOR_NAMES
        .iter()
        .chain(ACTION_NAMES.iter())
        .copied()
        .filter(|n| !seen.contains(*n))
        .collect()
}
