//! Scenario registry. Each scenario declares the flags it accepts, fills a
//! report and returns its acceptance checks.

mod quantum;
mod statistics;
mod waves;

use epilab::report::RunReport;

use crate::args::Args;
use crate::error::CliError;

/// One acceptance threshold evaluated by `--check`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, detail: detail.into() }
    }
}

pub trait Scenario: Sync {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    /// Scenario-specific flags; the global ones are always accepted.
    fn flags(&self) -> &'static [&'static str] {
        &[]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError>;
}

pub fn registry() -> Vec<Box<dyn Scenario>> {
    vec![
        Box::new(quantum::Born),
        Box::new(quantum::Chsh),
        Box::new(quantum::Mermin),
        Box::new(statistics::Example17),
        Box::new(quantum::Busch),
        Box::new(statistics::Birnbaum),
        Box::new(statistics::Reml),
        Box::new(statistics::Multinomial),
        Box::new(statistics::Entropy),
        Box::new(statistics::Orbits),
        Box::new(waves::Nelson),
        Box::new(waves::Theorem6),
    ]
}

pub fn find(name: &str) -> Option<Box<dyn Scenario>> {
    registry().into_iter().find(|s| s.name() == name)
}

/// Parses a JSON input document.
fn parse_json(text: &str, what: &str) -> Result<serde_json::Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input { path: what.to_string(), message: e.to_string() })
}

fn bad_input(what: &str, message: impl Into<String>) -> CliError {
    CliError::Input { path: what.to_string(), message: message.into() }
}
